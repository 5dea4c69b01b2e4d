#pragma once

#include <map>
#include <set>

#include "brvst/overlay.hpp"
#include "brvst/summary_forest.hpp"

namespace brvst {

// Grid Manager: keeps the grid's summary forest, reports the representative set
// to its zone manager when it changes, and delivers publications to matching
// local subscribers.
class GridManager {
 public:
  // `delivery_memory` bounds how long (pub, sub) deliveries are remembered to
  // suppress repeats when the zone manager re-forwards cached data.
  GridManager(GridId grid, ZoneId zone, double delivery_memory = 120.0)
      : grid_(grid), zone_(zone), delivery_memory_(delivery_memory) {
    last_grsv_.grid = grid;
  }

  GridId grid() const noexcept { return grid_; }
  ZoneId zone() const noexcept { return zone_; }
  const SummaryForest& forest() const noexcept { return forest_; }
  const Grsv& last_grsv() const noexcept { return last_grsv_; }

  HandlerResult handle_subscribe(const SubFilter& s, double now) {
    (void)now;
    forest_.add_subscription(s);
    HandlerResult r;
    report_if_changed(r);
    return r;
  }

  HandlerResult handle_unsubscribe(SubId id, double now) {
    (void)now;
    if (!forest_.contains(id)) {
      throw ProtocolError("grid " + std::to_string(grid_) + ": unsubscribe for unknown subscription " +
                          std::to_string(id));
    }
    forest_.remove_subscription(id);
    HandlerResult r;
    report_if_changed(r);
    return r;
  }

  // Publication from a node in this grid: serve local matches, then always hand
  // data, P-ARVs and the grid id to the zone manager.
  HandlerResult handle_publish(const PubFilter& p, double now) {
    HandlerResult r;
    deliver(p, now, r);
    r.send(Endpoint::zone(zone_), PubMsg{p, zone_, grid_});
    return r;
  }

  // Publication forwarded by the zone manager (same-zone, remote or cached).
  HandlerResult handle_forwarded(const PubMsg& m, double now) {
    HandlerResult r;
    deliver(m.pub, now, r);
    return r;
  }

  std::size_t storage_bytes() const {
    std::size_t log_entries = 0;
    for (const auto& [id, rec] : delivered_) log_entries += rec.subs.size();
    return 16 + forest_.storage_bytes() + log_entries * 8;
  }

  // State handed to a newly elected host: the serialized forest.
  std::size_t handoff_bytes() const { return forest_.storage_bytes(); }

 private:
  struct DeliveryRecord {
    double forget_at = 0.0;
    std::set<SubId> subs;
  };

  void report_if_changed(HandlerResult& r) {
    Grsv g = forest_.representative_set(grid_);
    if (g.version != last_grsv_.version) {
      last_grsv_ = g;
      r.send(Endpoint::zone(zone_), GrsvUpdateMsg{grid_, g.version, std::move(g.entries)});
    }
  }

  void deliver(const PubFilter& p, double now, HandlerResult& r) {
    for (auto it = delivered_.begin(); it != delivered_.end();) {
      it = it->second.forget_at <= now ? delivered_.erase(it) : std::next(it);
    }
    const auto match = forest_.match_publication(p);
    r.match_tests += match.root_tests + match.candidate_tests;
    if (match.hits.empty()) return;
    auto& rec = delivered_[p.pub_id];
    rec.forget_at = now + delivery_memory_;
    for (SubId id : match.hits) {
      if (!rec.subs.insert(id).second) continue;
      const auto& s = forest_.get(id);
      r.send(Endpoint::node(s.subscriber), DataDeliverMsg{p.pub_id, id, s.subscriber, p.payload_size});
    }
  }

  GridId grid_;
  ZoneId zone_;
  double delivery_memory_;
  SummaryForest forest_;
  Grsv last_grsv_{};
  std::map<PubId, DeliveryRecord> delivered_;
};

}  // namespace brvst
