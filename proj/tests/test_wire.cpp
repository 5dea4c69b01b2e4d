#include <gtest/gtest.h>

#include <random>

#include "brvst/wire.hpp"

using namespace brvst;

namespace {

Arv random_arv(std::mt19937_64& rng) {
  const int level = std::uniform_int_distribution<int>(0, 9)(rng);
  const std::size_t n = std::size_t{1} << level;
  std::string bits(n, '0');
  for (auto& c : bits) c = rng() % 2 ? '1' : '0';
  bits[rng() % n] = '1';
  return simplify(Arv::from_string(bits));
}

ArvSet random_set(std::mt19937_64& rng) {
  std::set<AttrId> ids;
  const int k = std::uniform_int_distribution<int>(1, 4)(rng);
  while (static_cast<int>(ids.size()) < k) ids.insert(static_cast<AttrId>(rng() % 300));
  ArvSet out;
  for (AttrId id : ids) out.push_back({id, random_arv(rng)});
  return out;
}

std::vector<ArvSet> random_entries(std::mt19937_64& rng) {
  std::vector<ArvSet> out(rng() % 4);
  for (auto& e : out) e = random_set(rng);
  return out;
}

Message random_message(std::mt19937_64& rng) {
  const auto u32 = [&] { return static_cast<std::uint32_t>(rng()); };
  switch (rng() % 7) {
    case 0: return SubMsg{SubFilter(u32(), u32(), random_set(rng))};
    case 1: return UnsubMsg{u32(), u32()};
    case 2: return PubMsg{PubFilter(u32(), u32(), random_set(rng), u32()), u32(), u32()};
    case 3: return GrsvUpdateMsg{u32(), u32(), random_entries(rng)};
    case 4: return ZrsvUpdateMsg{u32(), u32(), random_entries(rng)};
    case 5: return PubAnnounceMsg{u32(), u32(), u32(), random_set(rng)};
    default: return DataDeliverMsg{u32(), u32(), u32(), u32()};
  }
}

}  // namespace

TEST(Wire, SubscriptionLength) {
  const Message m = SubMsg{SubFilter(5, 9, {{3, Arv::from_string("10")}})};
  const auto bytes = encode_message(m);
  // kind 1 + sub 4 + node 4 + count 2 + attr 2 + level 1 + bits 1
  EXPECT_EQ(bytes.size(), 1u + 4 + 4 + 2 + 2 + 1 + 1);
  EXPECT_EQ(bytes, (std::vector<std::uint8_t>{1, 0, 0, 0, 5, 0, 0, 0, 9, 0, 1, 0, 3, 1, 0x80}));
  EXPECT_EQ(encoded_size(m), bytes.size());
}

TEST(Wire, KindTags) {
  EXPECT_EQ(encode_message(UnsubMsg{1, 2})[0], 2);
  EXPECT_EQ(encode_message(DataDeliverMsg{1, 2, 3, 4})[0], 7);
  EXPECT_STREQ(kind_name(MessageKind::kGrsvUpdate), "GRSV_UPDATE");
}

TEST(Wire, EmptyAttributeSetRejected) {
  PubAnnounceMsg a{1, 2, 3, {}};
  EXPECT_THROW(encode_message(a), EncodeError);
  SubMsg s;
  EXPECT_THROW(encode_message(s), EncodeError);
}

TEST(Wire, DecodeErrorsCarryOffset) {
  EXPECT_THROW(decode_message(std::vector<std::uint8_t>{}), DecodeError);
  try {
    decode_message(std::vector<std::uint8_t>{99, 0, 0});
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
  auto bytes = encode_message(UnsubMsg{1, 2});
  bytes.pop_back();
  try {
    decode_message(bytes);
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_GT(e.offset(), 0u);
  }
  bytes = encode_message(UnsubMsg{1, 2});
  bytes.push_back(0);
  EXPECT_THROW(decode_message(bytes), DecodeError);
}

TEST(Wire, UnsortedAttributesRejectedOnDecode) {
  auto bytes = encode_message(SubMsg{SubFilter(1, 1, {{1, Arv::from_string("1")}, {2, Arv::from_string("1")}})});
  // Swap the two attribute ids (offsets: tag 1, ids 8, count 2).
  std::swap(bytes[11], bytes[15]);
  std::swap(bytes[12], bytes[16]);
  EXPECT_THROW(decode_message(bytes), DecodeError);
}

TEST(WireProperty, RoundTrip) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 5000; ++i) {
    const auto m = random_message(rng);
    const auto bytes = encode_message(m);
    EXPECT_EQ(decode_message(bytes), m);
    EXPECT_EQ(encode_message(decode_message(bytes)), bytes);
  }
}

TEST(WireProperty, GarbledInputNeverCrashes) {
  std::mt19937_64 rng(32);
  int rejected = 0;
  for (int i = 0; i < 5000; ++i) {
    auto bytes = encode_message(random_message(rng));
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int e = 0; e < edits; ++e) {
      switch (rng() % 3) {
        case 0: bytes[rng() % bytes.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8)); break;
        case 1: bytes.resize(rng() % bytes.size()); break;
        default: bytes.push_back(static_cast<std::uint8_t>(rng())); break;
      }
      if (bytes.empty()) break;
    }
    try {
      const auto m = decode_message(bytes);
      EXPECT_EQ(encode_message(m), bytes);
    } catch (const DecodeError&) {
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 0);
}
