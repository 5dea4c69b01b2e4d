#pragma once

// Attributes, subscriptions, publications and the event-level match predicates.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "brvst/arv.hpp"
#include "brvst/error.hpp"

namespace brvst {

using AttrId = std::uint16_t;
using NodeId = std::uint32_t;
using SubId = std::uint32_t;
using PubId = std::uint32_t;

struct AttributeSchema {
  AttrId attr_id = 0;
  DomainLimit limit;
  std::string name;
};

class SchemaRegistry {
 public:
  SchemaRegistry() = default;

  // `count` attributes with ids 0..count-1. Limits cycle through a few widths so
  // that attribute types differ in scale.
  static SchemaRegistry with_default_attributes(std::size_t count = 15) {
    static constexpr double kWidths[] = {100.0, 200.0, 50.0, 1000.0, 24.0};
    SchemaRegistry reg;
    for (std::size_t i = 0; i < count; ++i) {
      const double w = kWidths[i % std::size(kWidths)];
      reg.add({static_cast<AttrId>(i), {0.0, w}, "a" + std::to_string(i)});
    }
    return reg;
  }

  static SchemaRegistry uniform(std::size_t count, DomainLimit limit) {
    SchemaRegistry reg;
    for (std::size_t i = 0; i < count; ++i) {
      reg.add({static_cast<AttrId>(i), limit, "a" + std::to_string(i)});
    }
    return reg;
  }

  void add(AttributeSchema schema) {
    validate(schema.limit);
    if (by_id_.contains(schema.attr_id)) {
      throw SchemaError("duplicate attribute id " + std::to_string(schema.attr_id));
    }
    by_id_.emplace(schema.attr_id, std::move(schema));
  }

  const AttributeSchema& at(AttrId id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw SchemaError("unknown attribute id " + std::to_string(id));
    return it->second;
  }

  bool contains(AttrId id) const { return by_id_.contains(id); }
  std::size_t size() const { return by_id_.size(); }

  const AttributeSchema* find_by_name(std::string_view name) const {
    for (const auto& [id, s] : by_id_) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  std::vector<AttrId> ids() const {
    std::vector<AttrId> out;
    out.reserve(by_id_.size());
    for (const auto& [id, s] : by_id_) out.push_back(id);
    return out;
  }

 private:
  std::map<AttrId, AttributeSchema> by_id_;
};

// One attribute's ARV as carried on the wire and stored by brokers.
struct AttrArv {
  AttrId attr_id = 0;
  Arv arv;
  friend bool operator==(const AttrArv&, const AttrArv&) = default;
};

// Attribute ARVs sorted by ascending attr_id, at most one per id.
using ArvSet = std::vector<AttrArv>;

struct AttributeInstance {
  AttrId attr_id = 0;
  ValueInterval range;
  Arv arv;
  friend bool operator==(const AttributeInstance&, const AttributeInstance&) = default;
};

inline AttributeInstance make_attribute(const SchemaRegistry& schema, const ArvConfig& cfg, AttrId id,
                                        ValueInterval range) {
  const auto& s = schema.at(id);
  return {id, range, build_arv(range, s.limit, cfg)};
}

namespace detail {

template <typename Attr>
void sort_and_check_attrs(std::vector<Attr>& attrs, const char* what) {
  if (attrs.empty()) throw ArgumentError(std::string(what) + " requires at least one attribute");
  std::sort(attrs.begin(), attrs.end(), [](const Attr& a, const Attr& b) { return a.attr_id < b.attr_id; });
  for (std::size_t i = 1; i < attrs.size(); ++i) {
    if (attrs[i].attr_id == attrs[i - 1].attr_id) {
      throw ArgumentError(std::string(what) + " has duplicate attribute id " +
                          std::to_string(attrs[i].attr_id));
    }
  }
}

template <typename Attr>
ArvSet to_arv_set(const std::vector<Attr>& attrs) {
  ArvSet out;
  out.reserve(attrs.size());
  for (const auto& a : attrs) out.push_back({a.attr_id, a.arv});
  return out;
}

}  // namespace detail

// Conjunction of attribute ranges.
struct Subscription {
  SubId sub_id = 0;
  NodeId subscriber = 0;
  std::vector<AttributeInstance> attrs;

  Subscription() = default;
  Subscription(SubId id, NodeId node, std::vector<AttributeInstance> a)
      : sub_id(id), subscriber(node), attrs(std::move(a)) {
    detail::sort_and_check_attrs(attrs, "subscription");
  }
  friend bool operator==(const Subscription&, const Subscription&) = default;
};

// Disjunction of attribute ranges; only the payload length is modeled.
struct Publication {
  PubId pub_id = 0;
  NodeId publisher = 0;
  std::vector<AttributeInstance> attrs;
  std::uint32_t payload_size = 0;

  Publication() = default;
  Publication(PubId id, NodeId node, std::vector<AttributeInstance> a, std::uint32_t payload = 0)
      : pub_id(id), publisher(node), attrs(std::move(a)), payload_size(payload) {
    detail::sort_and_check_attrs(attrs, "publication");
  }
  friend bool operator==(const Publication&, const Publication&) = default;
};

// Broker-side view of a subscription: ARVs only.
struct SubFilter {
  SubId sub_id = 0;
  NodeId subscriber = 0;
  ArvSet attrs;

  SubFilter() = default;
  SubFilter(SubId id, NodeId node, ArvSet a) : sub_id(id), subscriber(node), attrs(std::move(a)) {
    detail::sort_and_check_attrs(attrs, "subscription filter");
  }
  explicit SubFilter(const Subscription& s)
      : sub_id(s.sub_id), subscriber(s.subscriber), attrs(detail::to_arv_set(s.attrs)) {}
  friend bool operator==(const SubFilter&, const SubFilter&) = default;
};

struct PubFilter {
  PubId pub_id = 0;
  NodeId publisher = 0;
  ArvSet attrs;
  std::uint32_t payload_size = 0;

  PubFilter() = default;
  PubFilter(PubId id, NodeId node, ArvSet a, std::uint32_t payload = 0)
      : pub_id(id), publisher(node), attrs(std::move(a)), payload_size(payload) {
    detail::sort_and_check_attrs(attrs, "publication filter");
  }
  explicit PubFilter(const Publication& p)
      : pub_id(p.pub_id), publisher(p.publisher), attrs(detail::to_arv_set(p.attrs)),
        payload_size(p.payload_size) {}
  friend bool operator==(const PubFilter&, const PubFilter&) = default;
};

namespace detail {

template <typename T>
const auto& attrs_of(const T& x) {
  if constexpr (requires { x.attrs; }) {
    return x.attrs;
  } else {
    return x;
  }
}

}  // namespace detail

// Bit-level match of publication ARVs against subscription ARVs. Both sides are
// attribute lists sorted by id (a Publication/Subscription, a filter, or an
// ArvSet). Every subscription attribute must appear in the publication and
// each pair must satisfy ((P AND S) XOR P) == 0; extra publication
// attributes are ignored.
template <typename P, typename S>
bool match_event(const P& pub, const S& sub) {
  const auto& pa = detail::attrs_of(pub);
  const auto& sa = detail::attrs_of(sub);
  auto pit = pa.begin();
  for (const auto& s : sa) {
    while (pit != pa.end() && pit->attr_id < s.attr_id) ++pit;
    if (pit == pa.end() || pit->attr_id != s.attr_id) return false;
    if (!arv_match(pit->arv, s.arv)) return false;
  }
  return true;
}

// As above, but first resolves every attribute id against the schema.
template <typename P, typename S>
bool match_event(const SchemaRegistry& schema, const P& pub, const S& sub) {
  for (const auto& a : detail::attrs_of(pub)) schema.at(a.attr_id);
  for (const auto& a : detail::attrs_of(sub)) schema.at(a.attr_id);
  return match_event(pub, sub);
}

// Ground truth on real intervals.
inline bool exact_match(const Publication& p, const Subscription& s) {
  auto pit = p.attrs.begin();
  for (const auto& a : s.attrs) {
    while (pit != p.attrs.end() && pit->attr_id < a.attr_id) ++pit;
    if (pit == p.attrs.end() || pit->attr_id != a.attr_id) return false;
    if (!a.range.contains(pit->range)) return false;
  }
  return true;
}

// Text fixture lines: `S <id> <node> <attr>=<lo>..<hi> ...` or
// `P <id> <node> [bytes=<n>] <attr>=<lo>..<hi> ...`; attr is a numeric id or a
// schema name. Blank lines and lines starting with '#' are skipped.
using FixtureEvent = std::variant<Subscription, Publication>;

namespace detail {

inline double parse_double(std::string_view text, std::string_view line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ArgumentError("bad number '" + std::string(text) + "' in fixture line: " + std::string(line));
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view line) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ArgumentError("bad integer '" + std::string(text) + "' in fixture line: " + std::string(line));
  }
  return v;
}

}  // namespace detail

inline FixtureEvent parse_fixture_line(std::string_view line, const SchemaRegistry& schema,
                                       const ArvConfig& cfg) {
  std::istringstream in{std::string(line)};
  std::string kind, id_text, node_text;
  if (!(in >> kind >> id_text >> node_text) || (kind != "S" && kind != "P")) {
    throw ArgumentError("malformed fixture line: " + std::string(line));
  }
  const auto id = detail::parse_int<std::uint32_t>(id_text, line);
  const auto node = detail::parse_int<NodeId>(node_text, line);
  std::vector<AttributeInstance> attrs;
  std::uint32_t payload = 0;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ArgumentError("malformed fixture token '" + tok + "'");
    const std::string_view key(tok.data(), eq);
    const std::string_view value(tok.data() + eq + 1, tok.size() - eq - 1);
    if (key == "bytes") {
      payload = detail::parse_int<std::uint32_t>(value, line);
      continue;
    }
    const auto dots = value.find("..");
    if (dots == std::string_view::npos) throw ArgumentError("expected lo..hi in '" + tok + "'");
    AttrId attr = 0;
    if (const auto* named = schema.find_by_name(key)) {
      attr = named->attr_id;
    } else {
      attr = detail::parse_int<AttrId>(key, line);
    }
    const ValueInterval range{detail::parse_double(value.substr(0, dots), line),
                              detail::parse_double(value.substr(dots + 2), line)};
    attrs.push_back(make_attribute(schema, cfg, attr, range));
  }
  if (kind == "S") return Subscription(id, node, std::move(attrs));
  return Publication(id, node, std::move(attrs), payload);
}

inline std::vector<FixtureEvent> parse_fixture(std::istream& in, const SchemaRegistry& schema,
                                               const ArvConfig& cfg) {
  std::vector<FixtureEvent> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_fixture_line(line, schema, cfg));
  }
  return out;
}

inline std::string format_fixture_line(const FixtureEvent& ev) {
  std::ostringstream out;
  out.precision(17);
  auto attrs_out = [&](const std::vector<AttributeInstance>& attrs) {
    for (const auto& a : attrs) out << ' ' << a.attr_id << '=' << a.range.lo << ".." << a.range.hi;
  };
  if (const auto* s = std::get_if<Subscription>(&ev)) {
    out << "S " << s->sub_id << ' ' << s->subscriber;
    attrs_out(s->attrs);
  } else {
    const auto& p = std::get<Publication>(ev);
    out << "P " << p.pub_id << ' ' << p.publisher << " bytes=" << p.payload_size;
    attrs_out(p.attrs);
  }
  return out.str();
}

}  // namespace brvst
