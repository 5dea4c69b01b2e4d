#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "brvst/error.hpp"
#include "brvst/wire.hpp"

namespace brvst {

// Publications held at a zone manager for later subscriptions. When full, the
// entry with the fewest match hits is evicted (ties: oldest insertion).
class PubCache {
 public:
  struct Entry {
    PubMsg pub;
    double expires_at = 0.0;
    std::uint32_t hits = 0;
    std::uint64_t seq = 0;
  };

  explicit PubCache(std::size_t capacity = 256) : capacity_(capacity) {
    if (capacity_ == 0) throw ConfigError("publication cache capacity must be positive");
  }

  // Returns the evicted publication id, if any.
  std::optional<PubId> insert(PubMsg pub, double now, double ttl, std::uint32_t hits = 0) {
    purge(now);
    std::optional<PubId> evicted;
    const PubId id = pub.pub.pub_id;
    if (!entries_.contains(id) && entries_.size() >= capacity_) {
      auto victim = entries_.begin();
      for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (it->second.hits < victim->second.hits ||
            (it->second.hits == victim->second.hits && it->second.seq < victim->second.seq)) {
          victim = it;
        }
      }
      evicted = victim->first;
      entries_.erase(victim);
    }
    entries_[id] = Entry{std::move(pub), now + ttl, hits, next_seq_++};
    return evicted;
  }

  std::size_t purge(double now) {
    std::size_t removed = 0;
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (it->second.expires_at <= now) {
        it = entries_.erase(it);
        ++removed;
      } else {
        ++it;
      }
    }
    return removed;
  }

  // Live entries in ascending pub id order.
  void for_each_live(double now, const std::function<void(Entry&)>& fn) {
    for (auto& [id, e] : entries_) {
      if (e.expires_at > now) fn(e);
    }
  }

  const Entry* find(PubId id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }

  // Cached data plus its wire header, expiry and hit counter.
  std::size_t storage_bytes() const {
    std::size_t total = 0;
    for (const auto& [id, e] : entries_) {
      total += encoded_size(Message{e.pub}) + e.pub.pub.payload_size + 8 + 4;
    }
    return total;
  }

 private:
  std::size_t capacity_;
  std::map<PubId, Entry> entries_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace brvst
