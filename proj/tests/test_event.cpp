#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

#include "brvst/event.hpp"

using namespace brvst;

namespace {

ArvConfig alpha(double a) {
  ArvConfig c;
  c.alpha = a;
  return c;
}

const auto kSchema = SchemaRegistry::uniform(8, {0, 100});

AttributeInstance attr(AttrId id, double lo, double hi, const ArvConfig& cfg = alpha(0.8)) {
  return make_attribute(kSchema, cfg, id, {lo, hi});
}

AttrArv bits(AttrId id, const char* b) { return {id, Arv::from_string(b)}; }

// Longhand evaluation: scale each pair to a common length, concatenate the
// subscription-side attributes into P and S, then test (P AND S) XOR P == 0.
bool concatenated_match(const ArvSet& pub, const ArvSet& sub) {
  std::string P, S;
  for (const auto& s : sub) {
    const AttrArv* p = nullptr;
    for (const auto& x : pub) {
      if (x.attr_id == s.attr_id) p = &x;
    }
    if (!p) return false;
    const int level = std::max(p->arv.level(), s.arv.level());
    P += extend(p->arv, level).to_string();
    S += extend(s.arv, level).to_string();
  }
  for (std::size_t i = 0; i < P.size(); ++i) {
    const bool and_bit = P[i] == '1' && S[i] == '1';
    const bool xor_bit = and_bit != (P[i] == '1');
    if (xor_bit) return false;
  }
  return true;
}

}  // namespace

TEST(MatchEvent, CompositeTwoAttributeExample) {
  const SubFilter sub(1, 1, {bits(1, "0111"), bits(2, "0100")});
  const PubFilter pub(1, 2, {bits(1, "01"), bits(2, "0110"), bits(5, "10")});
  const bool oracle = concatenated_match(pub.attrs, sub.attrs);
  EXPECT_FALSE(oracle);
  EXPECT_EQ(match_event(pub, sub), oracle);
  // The first attribute alone passes; the second one blocks the match.
  EXPECT_TRUE(arv_match(pub.attrs[0].arv, sub.attrs[0].arv));
  EXPECT_FALSE(arv_match(pub.attrs[1].arv, sub.attrs[1].arv));
}

TEST(MatchEvent, MissingAttribute) {
  const Subscription s(1, 0, {attr(3, 10, 20)});
  const Publication p(1, 0, {attr(0, 10, 20), attr(1, 10, 20)});
  EXPECT_FALSE(match_event(p, s));
  EXPECT_FALSE(exact_match(p, s));
}

TEST(MatchEvent, ComposedVectors) {
  const Subscription s(1, 0, {attr(0, 1, 48)});
  const Publication p(1, 0, {attr(0, 26, 47)});
  EXPECT_EQ(s.attrs[0].arv.to_string(), "10");
  EXPECT_EQ(p.attrs[0].arv.to_string(), "0100");
  EXPECT_TRUE(match_event(p, s));
  EXPECT_TRUE(exact_match(p, s));
  const Publication q(2, 0, {attr(0, 38, 60)});
  EXPECT_FALSE(exact_match(q, s));
  EXPECT_FALSE(match_event(q, s));
}

TEST(MatchEvent, ExtraPublicationAttributesIgnored) {
  const Subscription s(1, 0, {attr(2, 0, 50)});
  const Publication p(1, 0, {attr(1, 0, 100), attr(2, 10, 20), attr(7, 3, 4)});
  EXPECT_TRUE(match_event(p, s));
  EXPECT_TRUE(exact_match(p, s));
}

TEST(MatchEvent, UnknownAttributeIsSchemaError) {
  const SubFilter s(1, 0, {bits(42, "10")});
  const PubFilter p(1, 0, {bits(42, "10")});
  EXPECT_THROW(match_event(kSchema, p, s), SchemaError);
  EXPECT_TRUE(match_event(p, s));
}

TEST(Events, ConstructionRules) {
  EXPECT_THROW(Subscription(1, 0, {}), ArgumentError);
  EXPECT_THROW(Publication(1, 0, {}), ArgumentError);
  EXPECT_THROW(Subscription(1, 0, {attr(1, 0, 1), attr(1, 2, 3)}), ArgumentError);
  const Subscription s(1, 0, {attr(5, 0, 1), attr(2, 0, 1)});
  EXPECT_EQ(s.attrs[0].attr_id, 2);
  EXPECT_EQ(s.attrs[1].attr_id, 5);
  EXPECT_THROW(make_attribute(kSchema, alpha(0.9), 99, {0, 1}), SchemaError);
  EXPECT_THROW(make_attribute(kSchema, alpha(0.9), 0, {0, 101}), DomainError);
}

TEST(Schema, Registry) {
  auto reg = SchemaRegistry::with_default_attributes();
  EXPECT_EQ(reg.size(), 15u);
  EXPECT_THROW(reg.add({3, {0, 1}, "dup"}), SchemaError);
  EXPECT_THROW(reg.add({99, {1, 1}, "bad"}), DomainError);
  ASSERT_NE(reg.find_by_name("a4"), nullptr);
  EXPECT_EQ(reg.find_by_name("a4")->attr_id, 4);
  EXPECT_EQ(reg.find_by_name("nope"), nullptr);
}

TEST(Fixtures, ParseAndFormat) {
  std::istringstream in(
      "# comment\n"
      "S 7 3 a0=1..48 2=10..20\n"
      "\n"
      "P 9 4 bytes=128 0=26..47\n");
  const auto evs = parse_fixture(in, kSchema, alpha(0.8));
  ASSERT_EQ(evs.size(), 2u);
  const auto& s = std::get<Subscription>(evs[0]);
  EXPECT_EQ(s.sub_id, 7u);
  EXPECT_EQ(s.subscriber, 3u);
  ASSERT_EQ(s.attrs.size(), 2u);
  EXPECT_EQ(s.attrs[0].arv.to_string(), "10");
  const auto& p = std::get<Publication>(evs[1]);
  EXPECT_EQ(p.payload_size, 128u);
  EXPECT_TRUE(match_event(p, s) == false);  // attribute 2 missing
  const auto line = format_fixture_line(evs[1]);
  EXPECT_EQ(line, "P 9 4 bytes=128 0=26..47");
  const auto again = parse_fixture_line(line, kSchema, alpha(0.8));
  EXPECT_EQ(std::get<Publication>(again), p);
}

TEST(Fixtures, Malformed) {
  EXPECT_THROW(parse_fixture_line("X 1 2 0=1..2", kSchema, alpha(0.9)), ArgumentError);
  EXPECT_THROW(parse_fixture_line("S 1 2 0=1-2", kSchema, alpha(0.9)), ArgumentError);
  EXPECT_THROW(parse_fixture_line("S one 2 0=1..2", kSchema, alpha(0.9)), ArgumentError);
  EXPECT_THROW(parse_fixture_line("S 1 2", kSchema, alpha(0.9)), ArgumentError);
}

// --- properties ---

TEST(EventProperty, EqualLevelSoundnessAndCoverage) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> nattr(1, 3), aid(0, 7);
  std::uniform_real_distribution<double> u(0, 100);
  for (int level : {2, 5, 9}) {
    ArvConfig cfg = alpha(0.9);
    cfg.fixed_level = level;
    for (int i = 0; i < 2000; ++i) {
      std::vector<AttributeInstance> sa, pa;
      std::set<int> used;
      const int k = nattr(rng);
      while (static_cast<int>(used.size()) < k) used.insert(aid(rng));
      for (int id : used) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        std::uniform_real_distribution<double> inner(a, b);
        double c = inner(rng), d = inner(rng);
        if (c > d) std::swap(c, d);
        sa.push_back(make_attribute(kSchema, cfg, static_cast<AttrId>(id), {a, b}));
        pa.push_back(make_attribute(kSchema, cfg, static_cast<AttrId>(id), {c, d}));
      }
      const Subscription s(1, 0, sa);
      const Publication p(1, 0, pa);
      ASSERT_TRUE(exact_match(p, s));
      EXPECT_TRUE(match_event(p, s));
    }
  }
}

TEST(EventProperty, MatchImpliesCoverageContainment) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0, 100), al(0.6, 1.0);
  int matched = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto cfg = alpha(al(rng));
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const Subscription s(1, 0, {make_attribute(kSchema, cfg, 0, {a, b})});
    const Publication p(1, 0, {make_attribute(kSchema, cfg, 0, {c, d})});
    if (!match_event(p, s)) continue;
    ++matched;
    for (const auto& pc : coverage(p.attrs[0].arv, {0, 100})) {
      bool inside = false;
      for (const auto& sc : coverage(s.attrs[0].arv, {0, 100})) inside = inside || sc.contains(pc);
      EXPECT_TRUE(inside);
    }
  }
  EXPECT_GT(matched, 1000);
}

TEST(EventProperty, RemovingSubscriptionAttributeFromPublicationBreaksMatch) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 100);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    std::vector<AttributeInstance> sa, pa;
    for (AttrId id = 0; id < 3; ++id) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      sa.push_back(attr(id, a, b, alpha(0.9)));
      pa.push_back(attr(id, (a + b) / 2, (a + b) / 2, alpha(0.9)));
    }
    pa.push_back(attr(5, 1, 2, alpha(0.9)));
    const Subscription s(1, 0, sa);
    const Publication p(1, 0, pa);
    if (!match_event(p, s)) continue;
    ++checked;
    for (std::size_t drop = 0; drop < 3; ++drop) {
      auto fewer = pa;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(drop));
      EXPECT_FALSE(match_event(Publication(1, 0, fewer), s));
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(EventProperty, AgreementTable) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0, 100);
  int tp = 0, fp = 0, fn = 0, tn = 0;
  for (int i = 0; i < 10000; ++i) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const Subscription s(1, 0, {attr(0, a, b, alpha(0.9))});
    const Publication p(1, 0, {attr(0, c, d, alpha(0.9))});
    const bool m = match_event(p, s), e = exact_match(p, s);
    tp += m && e;
    fp += m && !e;
    fn += !m && e;
    tn += !m && !e;
  }
  EXPECT_EQ(tp + fp + fn + tn, 10000);
  EXPECT_GT(tp, 0);
  // Coarse-vs-fine comparisons cause rare misses; they stay a small fraction.
  EXPECT_LT(static_cast<double>(fn), 0.01 * (tp + fn));
  EXPECT_LT(static_cast<double>(fp), 0.15 * (tp + fp));
}
