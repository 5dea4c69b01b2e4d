#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "brvst/overlay.hpp"
#include "brvst/pub_cache.hpp"
#include "brvst/summary_forest.hpp"

namespace brvst {

struct ZoneConfig {
  double announce_period = 60.0;  // T_announce
  double cache_ttl = 120.0;
  std::size_t cache_capacity = 256;
  double zrsv_timeout = 300.0;  // learned (non-neighbor) peer ZRSV lifetime without matches
  bool active_search = false;
};

// Zone's view of the rest of the overlay.
struct ZoneDirectory {
  std::vector<GridId> grids;         // grids of this zone
  std::vector<ZoneId> neighbors;     // geographically adjacent zones
  std::vector<ZoneId> all_zones;     // every zone, this one included
  std::vector<ZoneId> search_zones;  // zones within the active-search radius
};

struct Zrsv {
  ZoneId zone = 0;
  std::uint32_t version = 0;
  std::vector<ArvSet> entries;
  friend bool operator==(const Zrsv&, const Zrsv&) = default;
};

namespace detail {

template <typename Pub>
bool any_entry_matches(const Pub& p, const std::vector<ArvSet>& entries, std::size_t& tests) {
  for (const auto& e : entries) {
    ++tests;
    if (match_event(p, e)) return true;
  }
  return false;
}

// Entries of `now` not present (with multiplicity) in `before`.
inline std::vector<ArvSet> added_entries(const std::vector<ArvSet>& before, const std::vector<ArvSet>& now) {
  std::vector<bool> used(before.size(), false);
  std::vector<ArvSet> out;
  for (const auto& e : now) {
    bool found = false;
    for (std::size_t i = 0; i < before.size() && !found; ++i) {
      if (!used[i] && before[i] == e) {
        used[i] = true;
        found = true;
      }
    }
    if (!found) out.push_back(e);
  }
  return out;
}

// Aggregates representative subscriptions with a fresh summary forest.
inline std::vector<ArvSet> aggregate_entries(const std::map<GridId, Grsv>& sof) {
  SummaryForest forest;
  SubId next = 0;
  for (const auto& [grid, g] : sof) {
    for (const auto& e : g.entries) forest.add_subscription(SubFilter(next++, grid, e));
  }
  return forest.representative_entries();
}

}  // namespace detail

// Zone Manager: maintains the SOF (grid -> GRSV), the zone's aggregated ZRSV,
// peer zones' ZRSVs, the publication cache and first-time announcements.
class ZoneManager {
 public:
  struct Peer {
    Zrsv zrsv;
    double last_match = 0.0;
  };

  ZoneManager(ZoneId zone, ZoneDirectory dir, ZoneConfig cfg = {})
      : zone_(zone), dir_(std::move(dir)), cfg_(cfg), cache_(cfg.cache_capacity) {
    own_.zone = zone;
    std::sort(dir_.neighbors.begin(), dir_.neighbors.end());
  }

  ZoneId zone() const noexcept { return zone_; }
  const std::map<GridId, Grsv>& sof() const noexcept { return sof_; }
  const Zrsv& own_zrsv() const noexcept { return own_; }
  const std::map<ZoneId, Peer>& peers() const noexcept { return peers_; }
  const std::set<ZoneId>& learned_publisher_zones() const noexcept { return learned_; }
  const PubCache& cache() const noexcept { return cache_; }
  const ZoneConfig& config() const noexcept { return cfg_; }

  HandlerResult handle_grsv_update(const GrsvUpdateMsg& m, double now) {
    if (std::find(dir_.grids.begin(), dir_.grids.end(), m.grid) == dir_.grids.end()) {
      throw ProtocolError("grid " + std::to_string(m.grid) + " is not in zone " + std::to_string(zone_));
    }
    HandlerResult r;
    std::vector<ArvSet> before;
    if (auto it = sof_.find(m.grid); it != sof_.end()) {
      if (m.version <= it->second.version) return r;  // stale or duplicate
      before = it->second.entries;
    }
    if (m.entries.empty()) {
      sof_.erase(m.grid);
    } else {
      sof_[m.grid] = Grsv{m.grid, m.version, m.entries};
    }
    refresh_zrsv(r);

    const auto added = detail::added_entries(before, m.entries);
    if (!added.empty()) {
      cache_.for_each_live(now, [&](PubCache::Entry& e) {
        if (detail::any_entry_matches(e.pub.pub, added, r.match_tests)) {
          ++e.hits;
          r.send(Endpoint::grid(m.grid), e.pub);
        }
      });
    }
    return r;
  }

  // Publication handed up by one of this zone's grid managers.
  HandlerResult handle_publish(const PubMsg& m, double now) {
    HandlerResult r;
    std::uint32_t hits = 0;
    for (const auto& [grid, g] : sof_) {
      if (grid == m.src_grid) continue;
      if (detail::any_entry_matches(m.pub, g.entries, r.match_tests)) {
        r.send(Endpoint::grid(grid), m);
        ++hits;
      }
    }
    for (auto& [zone, peer] : peers_) {
      if (detail::any_entry_matches(m.pub, peer.zrsv.entries, r.match_tests)) {
        peer.last_match = now;
        r.send(Endpoint::zone(zone), m);
        ++hits;
      }
    }
    cache_.insert(m, now, cfg_.cache_ttl, hits);

    const auto sig = std::make_pair(m.pub.publisher, fnv1a(encode_message(PubAnnounceMsg{0, 0, 0, m.pub.attrs})));
    auto it = announced_.find(sig);
    if (it == announced_.end() || now - it->second >= cfg_.announce_period) {
      announced_[sig] = now;
      for (ZoneId z : dir_.all_zones) {
        if (z == zone_) continue;
        r.send(Endpoint::zone(z), PubAnnounceMsg{m.pub.pub_id, m.pub.publisher, zone_, m.pub.attrs});
      }
    }
    return r;
  }

  // Publication data sent here by another zone's manager.
  HandlerResult handle_remote_publish(const PubMsg& m, double now) {
    (void)now;
    HandlerResult r;
    learned_.insert(m.src_zone);
    bool any = false;
    for (const auto& [grid, g] : sof_) {
      if (detail::any_entry_matches(m.pub, g.entries, r.match_tests)) {
        r.send(Endpoint::grid(grid), m);
        any = true;
      }
    }
    if (!any) {
      // Unwanted traffic: tell the sender what this zone actually wants.
      r.send(Endpoint::zone(m.src_zone), ZrsvUpdateMsg{zone_, own_.version, own_.entries});
    }
    return r;
  }

  HandlerResult handle_announce(const PubAnnounceMsg& m, double now) {
    (void)now;
    HandlerResult r;
    if (m.src_zone == zone_ || own_.entries.empty()) return r;
    if (detail::any_entry_matches(m, own_.entries, r.match_tests)) {
      learned_.insert(m.src_zone);
      r.send(Endpoint::zone(m.src_zone), ZrsvUpdateMsg{zone_, own_.version, own_.entries});
    }
    return r;
  }

  // ZRSV from another zone (periodic, on change, or as an announce reply).
  HandlerResult handle_zrsv_update(const ZrsvUpdateMsg& m, double now) {
    HandlerResult r;
    if (m.zone == zone_) return r;
    std::vector<ArvSet> before;
    if (auto it = peers_.find(m.zone); it != peers_.end()) {
      if (m.version < it->second.zrsv.version) return r;
      before = it->second.zrsv.entries;
    }
    if (m.entries.empty() && !is_neighbor(m.zone)) {
      peers_.erase(m.zone);
      return r;
    }
    Peer& peer = peers_[m.zone];
    peer.zrsv = Zrsv{m.zone, m.version, m.entries};
    peer.last_match = now;
    const auto added = detail::added_entries(before, m.entries);
    if (!added.empty()) {
      cache_.for_each_live(now, [&](PubCache::Entry& e) {
        if (detail::any_entry_matches(e.pub.pub, added, r.match_tests)) {
          ++e.hits;
          r.send(Endpoint::zone(m.zone), e.pub);
        }
      });
    }
    return r;
  }

  // Drops learned peer ZRSVs without a match for longer than the timeout.
  // Neighbor zones are always kept.
  std::vector<ZoneId> expire(double now) {
    std::vector<ZoneId> removed;
    for (auto it = peers_.begin(); it != peers_.end();) {
      if (!is_neighbor(it->first) && it->second.last_match + cfg_.zrsv_timeout < now) {
        removed.push_back(it->first);
        it = peers_.erase(it);
      } else {
        ++it;
      }
    }
    cache_.purge(now);
    return removed;
  }

  // Recomputes the ZRSV from the SOF; must equal own_zrsv().entries.
  std::vector<ArvSet> recompute_zrsv_entries() const { return detail::aggregate_entries(sof_); }

  std::size_t storage_bytes() const {
    std::size_t total = 16;
    for (const auto& [grid, g] : sof_) total += 8 + encoded_size(g.entries);
    total += 8 + encoded_size(own_.entries);
    for (const auto& [zone, p] : peers_) total += 16 + encoded_size(p.zrsv.entries);
    total += cache_.storage_bytes();
    total += announced_.size() * 20 + learned_.size() * 4;
    return total;
  }

  // Control state moved on manager handoff (cached data included).
  std::size_t handoff_bytes() const { return storage_bytes(); }

 private:
  bool is_neighbor(ZoneId z) const {
    return std::binary_search(dir_.neighbors.begin(), dir_.neighbors.end(), z);
  }

  std::set<ZoneId> relevant_zones() const {
    std::set<ZoneId> out(dir_.neighbors.begin(), dir_.neighbors.end());
    out.insert(learned_.begin(), learned_.end());
    for (const auto& [z, p] : peers_) out.insert(z);
    if (cfg_.active_search) out.insert(dir_.search_zones.begin(), dir_.search_zones.end());
    out.erase(zone_);
    return out;
  }

  void refresh_zrsv(HandlerResult& r) {
    auto entries = detail::aggregate_entries(sof_);
    if (entries == own_.entries) return;
    own_.entries = std::move(entries);
    ++own_.version;
    for (ZoneId z : relevant_zones()) {
      r.send(Endpoint::zone(z), ZrsvUpdateMsg{zone_, own_.version, own_.entries});
    }
  }

  ZoneId zone_;
  ZoneDirectory dir_;
  ZoneConfig cfg_;
  std::map<GridId, Grsv> sof_;
  Zrsv own_;
  std::map<ZoneId, Peer> peers_;
  std::set<ZoneId> learned_;
  PubCache cache_;
  std::map<std::pair<NodeId, std::uint64_t>, double> announced_;
};

}  // namespace brvst
