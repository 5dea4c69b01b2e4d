#pragma once

// Byte encoding of every protocol message. Integers are big-endian; ids are 4
// bytes, attribute ids and counts 2 bytes, ARVs use the arv-core encoding.
// Attribute lists are written in ascending attr_id order.

#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "brvst/arv.hpp"
#include "brvst/error.hpp"
#include "brvst/event.hpp"

namespace brvst {

using GridId = std::uint32_t;
using ZoneId = std::uint32_t;

enum class MessageKind : std::uint8_t {
  kSub = 1,
  kUnsub = 2,
  kPub = 3,
  kGrsvUpdate = 4,
  kZrsvUpdate = 5,
  kPubAnnounce = 6,
  kDataDeliver = 7,
};

struct SubMsg {
  SubFilter sub;
  friend bool operator==(const SubMsg&, const SubMsg&) = default;
};

struct UnsubMsg {
  SubId sub_id = 0;
  NodeId subscriber = 0;
  friend bool operator==(const UnsubMsg&, const UnsubMsg&) = default;
};

// Publication data plus P-ARVs, tagged with where it entered the overlay.
struct PubMsg {
  PubFilter pub;
  ZoneId src_zone = 0;
  GridId src_grid = 0;
  friend bool operator==(const PubMsg&, const PubMsg&) = default;
};

struct GrsvUpdateMsg {
  GridId grid = 0;
  std::uint32_t version = 0;
  std::vector<ArvSet> entries;
  friend bool operator==(const GrsvUpdateMsg&, const GrsvUpdateMsg&) = default;
};

struct ZrsvUpdateMsg {
  ZoneId zone = 0;
  std::uint32_t version = 0;
  std::vector<ArvSet> entries;
  friend bool operator==(const ZrsvUpdateMsg&, const ZrsvUpdateMsg&) = default;
};

struct PubAnnounceMsg {
  PubId pub_id = 0;
  NodeId publisher = 0;
  ZoneId src_zone = 0;
  ArvSet attrs;
  friend bool operator==(const PubAnnounceMsg&, const PubAnnounceMsg&) = default;
};

struct DataDeliverMsg {
  PubId pub_id = 0;
  SubId sub_id = 0;
  NodeId subscriber = 0;
  std::uint32_t payload_size = 0;
  friend bool operator==(const DataDeliverMsg&, const DataDeliverMsg&) = default;
};

using Message =
    std::variant<SubMsg, UnsubMsg, PubMsg, GrsvUpdateMsg, ZrsvUpdateMsg, PubAnnounceMsg, DataDeliverMsg>;

inline MessageKind kind_of(const Message& m) {
  return static_cast<MessageKind>(m.index() + 1);
}

inline const char* kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::kSub: return "SUB";
    case MessageKind::kUnsub: return "UNSUB";
    case MessageKind::kPub: return "PUB";
    case MessageKind::kGrsvUpdate: return "GRSV_UPDATE";
    case MessageKind::kZrsvUpdate: return "ZRSV_UPDATE";
    case MessageKind::kPubAnnounce: return "PUB_ANNOUNCE";
    case MessageKind::kDataDeliver: return "DATA_DELIVER";
  }
  return "?";
}

// Opaque payload bytes that travel alongside the encoded message.
inline std::uint32_t payload_bytes(const Message& m) {
  if (const auto* p = std::get_if<PubMsg>(&m)) return p->pub.payload_size;
  if (const auto* d = std::get_if<DataDeliverMsg>(&m)) return d->payload_size;
  return 0;
}

namespace wire {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void count(std::size_t n, const char* what) {
    if (n > 0xFFFF) throw EncodeError(std::string(what) + " count exceeds 65535");
    u16(static_cast<std::uint16_t>(n));
  }
  void attrs(const ArvSet& set) {
    if (set.empty()) throw EncodeError("attribute set must be nonempty");
    count(set.size(), "attribute");
    AttrId prev = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i > 0 && set[i].attr_id <= prev) throw EncodeError("attributes must be strictly ascending");
      prev = set[i].attr_id;
      u16(set[i].attr_id);
      append_encoded(out_, set[i].arv);
    }
  }
  void entries(const std::vector<ArvSet>& entries) {
    count(entries.size(), "entry");
    for (const auto& e : entries) attrs(e);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  ArvSet attrs() {
    const std::size_t at = pos_;
    const auto n = u16();
    if (n == 0) throw DecodeError("empty attribute set", at);
    ArvSet set;
    set.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t id_at = pos_;
      const AttrId id = u16();
      if (!set.empty() && id <= set.back().attr_id) throw DecodeError("attributes not ascending", id_at);
      set.push_back({id, decode_arv(bytes_, pos_)});
    }
    return set;
  }
  std::vector<ArvSet> entries() {
    const auto n = u16();
    std::vector<ArvSet> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(attrs());
    return out;
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw DecodeError("truncated message", pos_);
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace wire

inline std::vector<std::uint8_t> encode_message(const Message& m) {
  wire::Writer w;
  w.u8(static_cast<std::uint8_t>(kind_of(m)));
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, SubMsg>) {
          w.u32(body.sub.sub_id);
          w.u32(body.sub.subscriber);
          w.attrs(body.sub.attrs);
        } else if constexpr (std::is_same_v<T, UnsubMsg>) {
          w.u32(body.sub_id);
          w.u32(body.subscriber);
        } else if constexpr (std::is_same_v<T, PubMsg>) {
          w.u32(body.pub.pub_id);
          w.u32(body.pub.publisher);
          w.u32(body.src_zone);
          w.u32(body.src_grid);
          w.u32(body.pub.payload_size);
          w.attrs(body.pub.attrs);
        } else if constexpr (std::is_same_v<T, GrsvUpdateMsg>) {
          w.u32(body.grid);
          w.u32(body.version);
          w.entries(body.entries);
        } else if constexpr (std::is_same_v<T, ZrsvUpdateMsg>) {
          w.u32(body.zone);
          w.u32(body.version);
          w.entries(body.entries);
        } else if constexpr (std::is_same_v<T, PubAnnounceMsg>) {
          w.u32(body.pub_id);
          w.u32(body.publisher);
          w.u32(body.src_zone);
          w.attrs(body.attrs);
        } else {
          static_assert(std::is_same_v<T, DataDeliverMsg>);
          w.u32(body.pub_id);
          w.u32(body.sub_id);
          w.u32(body.subscriber);
          w.u32(body.payload_size);
        }
      },
      m);
  return w.take();
}

inline Message decode_message(std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes);
  const auto tag = r.u8();
  Message m;
  switch (static_cast<MessageKind>(tag)) {
    case MessageKind::kSub: {
      SubFilter f;
      f.sub_id = r.u32();
      f.subscriber = r.u32();
      f.attrs = r.attrs();
      m = SubMsg{std::move(f)};
      break;
    }
    case MessageKind::kUnsub: {
      UnsubMsg u;
      u.sub_id = r.u32();
      u.subscriber = r.u32();
      m = u;
      break;
    }
    case MessageKind::kPub: {
      PubMsg p;
      p.pub.pub_id = r.u32();
      p.pub.publisher = r.u32();
      p.src_zone = r.u32();
      p.src_grid = r.u32();
      p.pub.payload_size = r.u32();
      p.pub.attrs = r.attrs();
      m = std::move(p);
      break;
    }
    case MessageKind::kGrsvUpdate: {
      GrsvUpdateMsg g;
      g.grid = r.u32();
      g.version = r.u32();
      g.entries = r.entries();
      m = std::move(g);
      break;
    }
    case MessageKind::kZrsvUpdate: {
      ZrsvUpdateMsg z;
      z.zone = r.u32();
      z.version = r.u32();
      z.entries = r.entries();
      m = std::move(z);
      break;
    }
    case MessageKind::kPubAnnounce: {
      PubAnnounceMsg a;
      a.pub_id = r.u32();
      a.publisher = r.u32();
      a.src_zone = r.u32();
      a.attrs = r.attrs();
      m = std::move(a);
      break;
    }
    case MessageKind::kDataDeliver: {
      DataDeliverMsg d;
      d.pub_id = r.u32();
      d.sub_id = r.u32();
      d.subscriber = r.u32();
      d.payload_size = r.u32();
      m = d;
      break;
    }
    default:
      throw DecodeError("unknown message kind " + std::to_string(tag), 0);
  }
  if (!r.done()) throw DecodeError("trailing bytes", r.pos());
  return m;
}

inline std::size_t encoded_size(const Message& m) { return encode_message(m).size(); }

// Sizes used for storage accounting; they match the wire layout above.
inline std::size_t encoded_size(const ArvSet& set) {
  std::size_t n = 2;
  for (const auto& a : set) n += 2 + encoded_size(a.arv);
  return n;
}

inline std::size_t encoded_size(const SubFilter& s) { return 4 + 4 + encoded_size(s.attrs); }

inline std::size_t encoded_size(const std::vector<ArvSet>& entries) {
  std::size_t n = 2;
  for (const auto& e : entries) n += encoded_size(e);
  return n;
}

}  // namespace brvst
