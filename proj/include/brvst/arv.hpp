#pragma once

// Attribute Range Vectors: level-tagged bit vectors over a recursively halved
// attribute domain. Bit i at level L marks segment i of 2^L equal segments,
// index 0 being the lowest-value segment.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "brvst/error.hpp"

namespace brvst {

struct ValueInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool is_point() const noexcept { return lo == hi; }
  double length() const noexcept { return hi - lo; }
  bool contains(const ValueInterval& other) const noexcept {
    return lo <= other.lo && other.hi <= hi;
  }
  friend bool operator==(const ValueInterval&, const ValueInterval&) = default;
};

struct DomainLimit {
  double min = 0.0;
  double max = 1.0;

  double span() const noexcept { return max - min; }
  friend bool operator==(const DomainLimit&, const DomainLimit&) = default;
};

inline constexpr int kMaxSupportedLevel = 24;

struct ArvConfig {
  double alpha = 0.9;
  int max_level = 16;
  // When set, every ARV is selected at exactly this level (then simplified).
  // Used to measure equal-resolution behavior.
  std::optional<int> fixed_level;
};

inline void validate(const ArvConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    throw ConfigError("alpha must lie in (0, 1], got " + std::to_string(cfg.alpha));
  }
  if (cfg.max_level < 0 || cfg.max_level > kMaxSupportedLevel) {
    throw ConfigError("max_level out of range: " + std::to_string(cfg.max_level));
  }
  if (cfg.fixed_level && (*cfg.fixed_level < 0 || *cfg.fixed_level > cfg.max_level)) {
    throw ConfigError("fixed_level must lie in [0, max_level]");
  }
}

inline void validate(const DomainLimit& limit) {
  if (!std::isfinite(limit.min) || !std::isfinite(limit.max) || !(limit.min < limit.max)) {
    throw DomainError("domain limit requires finite min < max");
  }
}

inline void validate(const ValueInterval& range, const DomainLimit& limit) {
  validate(limit);
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.lo > range.hi) {
    throw DomainError("value interval requires finite lo <= hi");
  }
  if (range.lo < limit.min || range.hi > limit.max) {
    throw DomainError("value interval [" + std::to_string(range.lo) + ", " +
                      std::to_string(range.hi) + "] outside domain limit");
  }
}

class Arv {
 public:
  // Level-0 vector with its single bit set: the whole domain.
  Arv() : Arv(0) { set(0); }

  static Arv zeros(int level) { return Arv(level); }

  // Parses "0100"-style text, index 0 first. Length must be a power of two and
  // at least one bit must be set. The result is NOT simplified.
  static Arv from_string(std::string_view text) {
    const std::size_t n = text.size();
    if (n == 0 || !std::has_single_bit(n)) {
      throw ArgumentError("ARV bit string length must be a power of two: '" + std::string(text) + "'");
    }
    const int level = std::countr_zero(n);
    if (level > kMaxSupportedLevel) throw ArgumentError("ARV too long");
    Arv v(level);
    for (std::size_t i = 0; i < n; ++i) {
      if (text[i] == '1') {
        v.set(i);
      } else if (text[i] != '0') {
        throw ArgumentError("ARV bit string may contain only 0 and 1");
      }
    }
    if (!v.any()) throw ArgumentError("ARV must have at least one bit set");
    return v;
  }

  int level() const noexcept { return level_; }
  std::size_t size() const noexcept { return std::size_t{1} << level_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

  void set_range(std::size_t first, std::size_t last_inclusive) noexcept {
    for (std::size_t i = first; i <= last_inclusive; ++i) set(i);
  }

  bool any() const noexcept {
    for (auto w : words_) {
      if (w != 0) return true;
    }
    return false;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // True when no halving step applies.
  bool is_canonical() const noexcept { return !halvable(); }

  // Every aligned pair (2i, 2i+1) holds equal bits and the level is at least 1.
  bool halvable() const noexcept { return level_ >= 1 && pairs_uniform(); }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  template <typename Fn>
  void for_each_set_bit(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        const int b = std::countr_zero(w);
        fn(wi * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  // True if every bit in [first, last] is set.
  bool all_in(std::size_t first, std::size_t last_inclusive) const noexcept {
    for (std::size_t i = first; i <= last_inclusive; ++i) {
      if (!test(i)) return false;
    }
    return true;
  }

  bool any_in(std::size_t first, std::size_t last_inclusive) const noexcept {
    for (std::size_t i = first; i <= last_inclusive; ++i) {
      if (test(i)) return true;
    }
    return false;
  }

  std::string to_string() const {
    std::string s(size(), '0');
    for_each_set_bit([&](std::size_t i) { s[i] = '1'; });
    return s;
  }

  friend bool operator==(const Arv& a, const Arv& b) = default;

 private:
  explicit Arv(int level)
      : level_(level), words_(((std::size_t{1} << level) + 63) / 64, 0) {}

  bool pairs_uniform() const noexcept {
    constexpr std::uint64_t kEven = 0x5555555555555555ULL;
    const std::size_t n = size();
    const std::uint64_t tail_mask = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      const std::uint64_t mask = (wi + 1 == words_.size()) ? tail_mask : ~std::uint64_t{0};
      const std::uint64_t w = words_[wi] & mask;
      if ((w & kEven & mask) != ((w >> 1) & kEven & mask)) return false;
    }
    return true;
  }

  int level_;
  std::vector<std::uint64_t> words_;
};

// Halves the vector while every aligned bit pair agrees. Coverage is unchanged.
inline Arv simplify(Arv v) {
  while (v.halvable()) {
    Arv half = Arv::zeros(v.level() - 1);
    const std::size_t n = half.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (v.test(2 * i)) half.set(i);
    }
    v = std::move(half);
  }
  return v;
}

// Duplicates each bit 2^(target_level - level) times. Not re-simplified.
inline Arv extend(const Arv& v, int target_level) {
  if (target_level < v.level()) {
    throw ArgumentError("extend target level " + std::to_string(target_level) +
                        " below current level " + std::to_string(v.level()));
  }
  if (target_level > kMaxSupportedLevel) throw ArgumentError("extend target level too large");
  if (target_level == v.level()) return v;
  Arv out = Arv::zeros(target_level);
  const std::size_t factor = std::size_t{1} << (target_level - v.level());
  v.for_each_set_bit([&](std::size_t i) { out.set_range(i * factor, (i + 1) * factor - 1); });
  return out;
}

// Bitwise OR at the finer of the two levels, then simplified.
inline Arv merge(const Arv& a, const Arv& b) {
  const int level = std::max(a.level(), b.level());
  Arv out = extend(a, level);
  const std::size_t shift = static_cast<std::size_t>(level - b.level());
  b.for_each_set_bit([&](std::size_t i) {
    out.set_range(i << shift, ((i + 1) << shift) - 1);
  });
  return simplify(std::move(out));
}

// ((p AND s) XOR p) == 0 at the common level, i.e. set-bits(p) is a subset of
// set-bits(s). Evaluated without materializing the extended vectors.
inline bool arv_match(const Arv& p, const Arv& s) {
  bool ok = true;
  if (p.level() >= s.level()) {
    const int shift = p.level() - s.level();
    p.for_each_set_bit([&](std::size_t i) {
      if (ok && !s.test(i >> shift)) ok = false;
    });
  } else {
    const int shift = s.level() - p.level();
    p.for_each_set_bit([&](std::size_t i) {
      if (ok && !s.all_in(i << shift, ((i + 1) << shift) - 1)) ok = false;
    });
  }
  return ok;
}

// Bitwise AND at the common level is nonzero.
inline bool overlaps(const Arv& a, const Arv& b) {
  const Arv& fine = a.level() >= b.level() ? a : b;
  const Arv& coarse = a.level() >= b.level() ? b : a;
  const int shift = fine.level() - coarse.level();
  bool hit = false;
  fine.for_each_set_bit([&](std::size_t i) {
    if (!hit && coarse.test(i >> shift)) hit = true;
  });
  return hit;
}

namespace detail {

// Coordinate of boundary i of n equal segments; boundary n is exactly max.
inline double segment_boundary(const DomainLimit& limit, std::size_t i, std::size_t n) {
  if (i >= n) return limit.max;
  return limit.min + limit.span() * (static_cast<double>(i) / static_cast<double>(n));
}

struct Selection {
  std::size_t first = 0;
  std::size_t last = 0;
};

// Segments at `level` intersecting range. Segment i covers [b_i, b_{i+1}),
// the last one closed at max, so a boundary point belongs to the upper segment.
inline Selection select_segments(const ValueInterval& range, const DomainLimit& limit, int level) {
  const std::size_t n = std::size_t{1} << level;
  const double scale = static_cast<double>(n) / limit.span();
  auto index_of = [&](double x) {
    const double t = std::floor((x - limit.min) * scale);
    if (t <= 0.0) return std::size_t{0};
    const auto idx = static_cast<std::size_t>(t);
    return idx >= n ? n - 1 : idx;
  };
  return {index_of(range.lo), index_of(range.hi)};
}

inline Arv arv_from_selection(int level, Selection sel) {
  Arv v = Arv::zeros(level);
  v.set_range(sel.first, sel.last);
  return simplify(std::move(v));
}

}  // namespace detail

struct ArvBuild {
  Arv arv;
  int selection_level = 0;
  // The depth cap was reached before the fitting ratio passed.
  bool saturated = false;
};

// Selects all level-`level` segments intersecting range, then simplifies.
inline Arv build_arv_at_level(const ValueInterval& range, const DomainLimit& limit, int level) {
  validate(range, limit);
  if (level < 0 || level > kMaxSupportedLevel) throw ConfigError("level out of range");
  return detail::arv_from_selection(level, detail::select_segments(range, limit, level));
}

// Refines from level 0 until |range| / |union of intersecting segments| >= alpha.
// Point values refine straight to the depth cap.
inline ArvBuild build_arv_ex(const ValueInterval& range, const DomainLimit& limit, const ArvConfig& cfg) {
  validate(cfg);
  validate(range, limit);
  if (cfg.fixed_level) {
    const int level = *cfg.fixed_level;
    return {detail::arv_from_selection(level, detail::select_segments(range, limit, level)), level, false};
  }
  if (range.is_point()) {
    const int level = cfg.max_level;
    return {detail::arv_from_selection(level, detail::select_segments(range, limit, level)), level, true};
  }
  for (int level = 0;; ++level) {
    const auto sel = detail::select_segments(range, limit, level);
    const std::size_t n = std::size_t{1} << level;
    const double covered = detail::segment_boundary(limit, sel.last + 1, n) -
                           detail::segment_boundary(limit, sel.first, n);
    const bool fits = range.length() / covered >= cfg.alpha;
    if (fits || level == cfg.max_level) {
      return {detail::arv_from_selection(level, sel), level, !fits};
    }
  }
}

inline Arv build_arv(const ValueInterval& range, const DomainLimit& limit, const ArvConfig& cfg) {
  return build_arv_ex(range, limit, cfg).arv;
}

// Maximal disjoint intervals covered by the set bits.
inline std::vector<ValueInterval> coverage(const Arv& v, const DomainLimit& limit) {
  std::vector<ValueInterval> out;
  const std::size_t n = v.size();
  std::size_t i = 0;
  while (i < n) {
    if (!v.test(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && v.test(j + 1)) ++j;
    out.push_back({detail::segment_boundary(limit, i, n), detail::segment_boundary(limit, j + 1, n)});
    i = j + 1;
  }
  return out;
}

inline double coverage_length(const Arv& v, const DomainLimit& limit) {
  double total = 0.0;
  for (const auto& iv : coverage(v, limit)) total += iv.length();
  return total;
}

// Wire form: one level byte, then ceil(2^level / 8) bytes, MSB of byte 0 = segment 0.
inline std::size_t encoded_size(const Arv& v) noexcept { return 1 + (v.size() + 7) / 8; }

inline void append_encoded(std::vector<std::uint8_t>& out, const Arv& v) {
  out.push_back(static_cast<std::uint8_t>(v.level()));
  const std::size_t nbytes = (v.size() + 7) / 8;
  const std::size_t base = out.size();
  out.resize(base + nbytes, 0);
  v.for_each_set_bit([&](std::size_t i) {
    out[base + i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  });
}

// Reads one ARV starting at `offset`, advancing it. Rejects nonzero padding,
// empty vectors and levels beyond the supported cap.
inline Arv decode_arv(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  if (offset >= bytes.size()) throw DecodeError("truncated ARV level", offset);
  const int level = bytes[offset];
  if (level > kMaxSupportedLevel) throw DecodeError("ARV level too large", offset);
  const std::size_t n = std::size_t{1} << level;
  const std::size_t nbytes = (n + 7) / 8;
  if (bytes.size() - offset - 1 < nbytes) throw DecodeError("truncated ARV bits", offset + 1);
  Arv v = Arv::zeros(level);
  for (std::size_t i = 0; i < nbytes * 8; ++i) {
    const bool bit = (bytes[offset + 1 + i / 8] >> (7 - i % 8)) & 1U;
    if (!bit) continue;
    if (i >= n) throw DecodeError("nonzero ARV padding", offset + 1 + i / 8);
    v.set(i);
  }
  if (!v.any()) throw DecodeError("empty ARV", offset);
  offset += 1 + nbytes;
  return v;
}

}  // namespace brvst
