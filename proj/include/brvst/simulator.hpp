#pragma once

// Single-threaded discrete-event world: mobile nodes on the grid/zone overlay,
// manager election with state handoff, hop-count routing costs and the metrics
// ledger. Events run in (time, sequence) order.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "brvst/baseline.hpp"
#include "brvst/config.hpp"
#include "brvst/geometry.hpp"
#include "brvst/grid_manager.hpp"
#include "brvst/metrics.hpp"
#include "brvst/mobility.hpp"
#include "brvst/workload.hpp"
#include "brvst/zone_manager.hpp"

namespace brvst {

inline constexpr double kForever = std::numeric_limits<double>::infinity();

// Bytes a non-broker keeps besides its own subscriptions (ids, grid, zone).
inline constexpr std::size_t kNodeBaseBytes = 20;

class Simulator {
 public:
  // Nodes start at random positions drawn from the seed.
  explicit Simulator(const SimConfig& cfg) : Simulator(cfg, std::nullopt) {}

  // Nodes start at the given positions (node count = positions.size()).
  Simulator(const SimConfig& cfg, std::optional<std::vector<Position>> positions)
      : cfg_(cfg),
        geo_((validate(cfg), cfg)),
        schema_(SchemaRegistry::with_default_attributes(static_cast<std::size_t>(cfg.schema_size))),
        mobility_(cfg.area_width, cfg.area_height, cfg.speed_min, cfg.speed_max, cfg.pause),
        mobility_rng_(stream_seed(cfg.seed, 1)) {
    const std::size_t n = positions ? positions->size() : static_cast<std::size_t>(cfg.nodes);
    if (n == 0) throw ConfigError("simulation needs at least one node");
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& node = nodes_[i];
      node.mob = mobility_.initial(mobility_rng_);
      if (positions) {
        const Position p = (*positions)[i];
        if (!geo_.in_area(p)) throw GeometryError("initial position outside area");
        node.mob.pos = p;
        node.mob.target = p;
        node.mob.speed = 0.0;
      }
      node.grid = geo_.grid_of(node.mob.pos);
    }
    for (GridId g = 0; g < geo_.grid_count(); ++g) {
      grids_.push_back(GridSlot{GridManager(g, geo_.zone_of(g), cfg.cache_ttl), std::nullopt, 0.0, {}});
    }
    for (ZoneId z = 0; z < geo_.zone_count(); ++z) {
      ZoneDirectory dir;
      dir.grids = geo_.grids_of_zone(z);
      zone_grids_.push_back(dir.grids);
      dir.neighbors = geo_.neighbors(z);
      for (ZoneId o = 0; o < geo_.zone_count(); ++o) dir.all_zones.push_back(o);
      dir.search_zones = geo_.zones_within(z, cfg.search_radius);
      zones_.push_back(ZoneSlot{ZoneManager(z, std::move(dir), cfg.zone()), std::nullopt, 0.0, {}});
    }
    for (NodeId i = 0; i < n; ++i) grids_[nodes_[i].grid].members.insert(i);
    for (GridId g = 0; g < grids_.size(); ++g) elect_grid(g, 0.0, false);
    for (ZoneId z = 0; z < zones_.size(); ++z) elect_zone(z, 0.0, false);

    ledger_.seed = cfg.seed;
    ledger_.config_hash = config_hash(cfg);
    trace_.alpha = cfg.alpha;
    trace_.max_level = cfg.max_level;
    trace_.fixed_level = cfg.fixed_level;
    trace_.schema_size = cfg.schema_size;
    trace_.cache_ttl = cfg.cache_ttl;
    end_time_ = cfg.duration + cfg.drain;
  }

  const SimConfig& config() const noexcept { return cfg_; }
  const Geometry& geometry() const noexcept { return geo_; }
  const SchemaRegistry& schema() const noexcept { return schema_; }
  const MetricsLedger& ledger() const noexcept { return ledger_; }
  const Trace& trace() const noexcept { return trace_; }
  double end_time() const noexcept { return end_time_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  Position position(NodeId n) const { return nodes_.at(n).mob.pos; }
  GridId grid_of_node(NodeId n) const { return nodes_.at(n).grid; }
  const GridManager& grid_manager(GridId g) const { return grids_.at(g).gm; }
  const ZoneManager& zone_manager(ZoneId z) const { return zones_.at(z).zm; }
  std::optional<NodeId> grid_host(GridId g) const { return grids_.at(g).host; }
  std::optional<NodeId> zone_host(ZoneId z) const { return zones_.at(z).host; }
  std::size_t grsv_updates() const noexcept { return grsv_updates_; }
  std::size_t subscription_changes() const noexcept { return subscription_changes_; }

  // Poisson workload over [0, duration] from the seed's workload stream.
  void schedule_workload() {
    WorkloadGenerator gen(cfg_, schema_, stream_seed(cfg_.seed, 2));
    for (auto& ev : gen.generate(cfg_.duration)) {
      if (auto* s = std::get_if<TimedSubscription>(&ev)) {
        s->sub.subscriber %= static_cast<NodeId>(nodes_.size());
        schedule_subscription(s->time, std::move(s->sub), cfg_.sub_lifetime);
      } else {
        auto& p = std::get<TimedPublication>(ev);
        p.pub.publisher %= static_cast<NodeId>(nodes_.size());
        schedule_publication(p.time, std::move(p.pub));
      }
    }
  }

  void schedule_subscription(double t, Subscription s, double lifetime = kForever) {
    check_node(s.subscriber);
    push(t, EvSubscribe{std::move(s), lifetime});
  }
  void schedule_publication(double t, Publication p) {
    check_node(p.publisher);
    push(t, EvPublish{std::move(p)});
  }
  void schedule_unsubscribe(double t, SubId id) { push(t, EvSubEnd{id}); }
  void schedule_move(double t, NodeId node, Position pos) {
    check_node(node);
    if (!geo_.in_area(pos)) throw GeometryError("move target outside area");
    push(t, EvMove{node, pos});
  }

  // Runs to duration + drain, then classifies the trace.
  const MetricsLedger& run() {
    if (ran_) throw StateError("simulation already ran");
    ran_ = true;
    if (cfg_.speed_max > 0.0) push(cfg_.mobility_tick, EvTick{});
    push(0.0, EvSample{});
    push(cfg_.expire_period, EvExpire{});
    while (!queue_.empty() && queue_.top().time <= end_time_) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      std::visit([&](auto& body) { handle(body); }, ev.body);
    }
    now_ = end_time_;
    finish();
    return ledger_;
  }

 private:
  struct EvTick {};
  struct EvSample {};
  struct EvExpire {};
  struct EvSubscribe {
    Subscription sub;
    double lifetime = kForever;
  };
  struct EvPublish {
    Publication pub;
  };
  struct EvSubEnd {
    SubId id = 0;
  };
  struct EvMove {
    NodeId node = 0;
    Position pos;
  };
  struct EvArrival {
    Endpoint from;
    Endpoint to;
    Message msg;
  };
  using Body = std::variant<EvTick, EvSample, EvExpire, EvSubscribe, EvPublish, EvSubEnd, EvMove, EvArrival>;

  struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    Body body;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  struct NodeState {
    RandomWaypoint::State mob;
    GridId grid = 0;
    std::map<SubId, Subscription> subs;
    std::map<SubId, GridId> registered;
  };
  struct GridSlot {
    GridManager gm;
    std::optional<NodeId> host;
    double available_at = 0.0;
    std::set<NodeId> members;
  };
  struct ZoneSlot {
    ZoneManager zm;
    std::optional<NodeId> host;
    double available_at = 0.0;
    NaiveFlatBroker naive;
  };
  struct PairTimes {
    double start = 0.0;
    bool matched = false;
  };

  static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  }

  void check_node(NodeId n) const {
    if (n >= nodes_.size()) throw ArgumentError("unknown node " + std::to_string(n));
  }

  void push(double t, Body body) {
    if (!(t >= now_)) throw StateError("event scheduled in the past");
    queue_.push(Event{t, next_seq_++, std::move(body)});
  }

  // --- endpoints and routing ---

  std::optional<NodeId> host_of(Endpoint e) const {
    switch (e.kind) {
      case Endpoint::Kind::kNode: return e.id;
      case Endpoint::Kind::kGrid:
        if (grids_[e.id].host) return grids_[e.id].host;
        return zones_[geo_.zone_of(e.id)].host;
      case Endpoint::Kind::kZone: return zones_[e.id].host;
    }
    return std::nullopt;
  }

  Position pos_of(Endpoint e) const {
    if (auto h = host_of(e)) return nodes_[*h].mob.pos;
    const ZoneId z = e.kind == Endpoint::Kind::kGrid ? geo_.zone_of(e.id) : e.id;
    return geo_.zone_center(z);
  }

  void charge(const std::string& kind, std::uint64_t bytes) {
    ledger_.traffic_by_kind[kind] += bytes;
    ++ledger_.messages_by_kind[kind];
    ledger_.total_traffic += bytes;
  }

  // Latency and traffic of moving `bytes` between two endpoints; nothing when
  // both are hosted by the same node.
  RouteCost cost_between(Endpoint from, Endpoint to, std::size_t bytes) const {
    const auto a = host_of(from);
    const auto b = host_of(to);
    if (a && b && *a == *b) return {0, 0.0, 0};
    return route_cost(pos_of(from), pos_of(to), bytes, cfg_);
  }

  void send(Endpoint from, Endpoint to, Message msg, double t) {
    std::size_t bytes = encoded_size(msg);
    if (const auto* d = std::get_if<DataDeliverMsg>(&msg)) bytes += d->payload_size;
    if (const auto* p = std::get_if<PubMsg>(&msg)) bytes += p->pub.payload_size;
    const auto cost = cost_between(from, to, bytes);
    charge(kind_name(kind_of(msg)), cost.traffic);
    double arrival = t + cost.latency;
    auto& last = channel_[{from, to}];
    arrival = std::max(arrival, last);
    last = arrival;
    push(arrival, EvArrival{from, to, std::move(msg)});
  }

  void emit(Endpoint from, HandlerResult r) {
    ledger_.match_tests += r.match_tests;
    const double t = now_ + static_cast<double>(r.match_tests) * cfg_.match_cost;
    for (auto& e : r.out) {
      if (std::holds_alternative<GrsvUpdateMsg>(e.msg)) ++grsv_updates_;
      send(from, e.to, std::move(e.msg), t);
    }
  }

  // --- election and handoff ---

  template <typename Range>
  std::optional<NodeId> nearest(const Range& members, Position center) const {
    std::optional<NodeId> best;
    double best_d = 0.0;
    for (NodeId n : members) {
      const double d = distance(nodes_[n].mob.pos, center);
      if (!best || d < best_d || (d == best_d && n < *best)) {
        best = n;
        best_d = d;
      }
    }
    return best;
  }

  void handoff(std::optional<NodeId> old_host, Position fallback, std::optional<NodeId> new_host, std::size_t bytes,
               double& available_at, double t, bool charged) {
    if (!charged || !new_host || old_host == new_host) return;
    const Position from = old_host ? nodes_[*old_host].mob.pos : fallback;
    const auto cost = route_cost(from, nodes_[*new_host].mob.pos, bytes, cfg_);
    charge("HANDOFF", cost.traffic);
    ++ledger_.handoffs;
    available_at = std::max(available_at, t + cost.latency);
  }

  void elect_grid(GridId g, double t, bool charged) {
    auto& slot = grids_[g];
    const auto winner = nearest(slot.members, geo_.grid_center(g));
    if (winner == slot.host) return;
    const auto old = slot.host;
    const Position parked = pos_of(Endpoint::zone(geo_.zone_of(g)));
    slot.host = winner;
    if (!slot.gm.forest().empty()) handoff(old, parked, winner, slot.gm.handoff_bytes(), slot.available_at, t, charged);
  }

  void elect_zone(ZoneId z, double t, bool charged) {
    auto& slot = zones_[z];
    std::vector<NodeId> members;
    for (GridId g : zone_grids_[z]) members.insert(members.end(), grids_[g].members.begin(), grids_[g].members.end());
    const auto winner = nearest(members, geo_.zone_center(z));
    if (winner == slot.host) return;
    const auto old = slot.host;
    slot.host = winner;
    handoff(old, geo_.zone_center(z), winner, slot.zm.handoff_bytes(), slot.available_at, t, charged);
  }

  // Updates position and membership; elections are left to the caller.
  void move_node(NodeId n, Position p) {
    auto& node = nodes_[n];
    node.mob.pos = p;
    const GridId g = geo_.grid_of(p);
    if (g == node.grid) return;
    const GridId old = node.grid;
    grids_[old].members.erase(n);
    grids_[g].members.insert(n);
    node.grid = g;
    for (auto& [id, reg] : node.registered) {
      const auto& sub = node.subs.at(id);
      send(Endpoint::node(n), Endpoint::grid(reg), UnsubMsg{id, n}, now_);
      send(Endpoint::node(n), Endpoint::grid(g), SubMsg{SubFilter(sub)}, now_);
      zones_[geo_.zone_of(reg)].naive.remove(id);
      zones_[geo_.zone_of(g)].naive.add(SubFilter(sub));
      subscription_changes_ += 2;
      reg = g;
    }
  }

  // --- event handlers ---

  void handle(EvTick&) {
    for (NodeId n = 0; n < nodes_.size(); ++n) {
      auto s = nodes_[n].mob;
      mobility_.advance(s, cfg_.mobility_tick, mobility_rng_);
      nodes_[n].mob = s;
      move_node(n, s.pos);
    }
    if (cfg_.fault_stale_membership && !fault_done_) {
      auto& p = nodes_[0].mob.pos;
      p.x = std::fmod(p.x + cfg_.area_width / 2, cfg_.area_width);
      fault_done_ = true;
    }
    elect_all();
    if (cfg_.check_invariants) check_membership();
    if (now_ + cfg_.mobility_tick <= end_time_) push(now_ + cfg_.mobility_tick, EvTick{});
  }

  void handle(EvMove& e) {
    move_node(e.node, e.pos);
    elect_all();
  }

  void elect_all() {
    for (GridId g = 0; g < grids_.size(); ++g) elect_grid(g, now_, true);
    for (ZoneId z = 0; z < zones_.size(); ++z) elect_zone(z, now_, true);
  }

  void handle(EvSubscribe& e) {
    const NodeId n = e.sub.subscriber;
    auto& node = nodes_[n];
    const SubId id = e.sub.sub_id;
    if (node.subs.contains(id) || sub_owner_.contains(id)) throw StateError("duplicate subscription id");
    for (const auto& a : e.sub.attrs) ledger_.saturated_arvs += a.range.is_point() ? 1 : 0;
    ++ledger_.subscriptions;
    ++subscription_changes_;
    sub_owner_[id] = n;
    sub_trace_[id] = trace_.subs.size();
    trace_.subs.push_back({e.sub, now_, kForever});
    sub_start_[id] = PairTimes{now_, false};
    node.registered[id] = node.grid;
    zones_[geo_.zone_of(node.grid)].naive.add(SubFilter(e.sub));
    send(Endpoint::node(n), Endpoint::grid(node.grid), SubMsg{SubFilter(e.sub)}, now_);
    node.subs.emplace(id, std::move(e.sub));
    if (e.lifetime != kForever) push(now_ + e.lifetime, EvSubEnd{id});
  }

  void handle(EvSubEnd& e) {
    auto owner = sub_owner_.find(e.id);
    if (owner == sub_owner_.end()) return;
    auto& node = nodes_[owner->second];
    if (!node.subs.contains(e.id)) return;
    const GridId reg = node.registered.at(e.id);
    send(Endpoint::node(owner->second), Endpoint::grid(reg), UnsubMsg{e.id, owner->second}, now_);
    zones_[geo_.zone_of(reg)].naive.remove(e.id);
    ++subscription_changes_;
    node.subs.erase(e.id);
    node.registered.erase(e.id);
    trace_.subs[sub_trace_.at(e.id)].end = now_;
  }

  void handle(EvPublish& e) {
    const NodeId n = e.pub.publisher;
    const auto& node = nodes_[n];
    for (const auto& a : e.pub.attrs) ledger_.saturated_arvs += a.range.is_point() ? 1 : 0;
    ++ledger_.publications;
    pub_start_[e.pub.pub_id] = PairTimes{now_, false};
    pub_times_[e.pub.pub_id] = now_;
    const GridId g = node.grid;
    send(Endpoint::node(n), Endpoint::grid(g), PubMsg{PubFilter(e.pub), geo_.zone_of(g), g}, now_);
    trace_.pubs.push_back({std::move(e.pub), now_});
  }

  void handle(EvArrival& e) {
    const double ready = e.to.kind == Endpoint::Kind::kGrid   ? grids_[e.to.id].available_at
                         : e.to.kind == Endpoint::Kind::kZone ? zones_[e.to.id].available_at
                                                              : 0.0;
    if (ready > now_) {
      push(ready, std::move(e));
      return;
    }
    try {
      dispatch(e);
    } catch (const ProtocolError&) {
      ++ledger_.protocol_errors;
    } catch (const StateError&) {
      ++ledger_.protocol_errors;
    }
  }

  void dispatch(EvArrival& e) {
    switch (e.to.kind) {
      case Endpoint::Kind::kNode: deliver(e.to.id, std::get<DataDeliverMsg>(e.msg)); return;
      case Endpoint::Kind::kGrid: {
        auto& gm = grids_[e.to.id].gm;
        HandlerResult r;
        if (auto* s = std::get_if<SubMsg>(&e.msg)) {
          r = gm.handle_subscribe(s->sub, now_);
        } else if (auto* u = std::get_if<UnsubMsg>(&e.msg)) {
          r = gm.handle_unsubscribe(u->sub_id, now_);
        } else if (auto* p = std::get_if<PubMsg>(&e.msg)) {
          r = e.from.kind == Endpoint::Kind::kNode ? gm.handle_publish(p->pub, now_) : gm.handle_forwarded(*p, now_);
        } else {
          throw ProtocolError("unexpected " + std::string(kind_name(kind_of(e.msg))) + " at grid manager");
        }
        emit(e.to, std::move(r));
        if (cfg_.check_invariants) {
          if (auto why = gm.forest().check_invariants(); !why.empty()) throw InvariantError(why);
        }
        return;
      }
      case Endpoint::Kind::kZone: {
        auto& zm = zones_[e.to.id].zm;
        HandlerResult r;
        if (auto* g = std::get_if<GrsvUpdateMsg>(&e.msg)) {
          r = zm.handle_grsv_update(*g, now_);
        } else if (auto* p = std::get_if<PubMsg>(&e.msg)) {
          r = e.from.kind == Endpoint::Kind::kGrid ? zm.handle_publish(*p, now_) : zm.handle_remote_publish(*p, now_);
        } else if (auto* a = std::get_if<PubAnnounceMsg>(&e.msg)) {
          r = zm.handle_announce(*a, now_);
        } else if (auto* z = std::get_if<ZrsvUpdateMsg>(&e.msg)) {
          r = zm.handle_zrsv_update(*z, now_);
        } else {
          throw ProtocolError("unexpected " + std::string(kind_name(kind_of(e.msg))) + " at zone manager");
        }
        emit(e.to, std::move(r));
        if (cfg_.check_invariants && zm.recompute_zrsv_entries() != zm.own_zrsv().entries) {
          throw InvariantError("zone " + std::to_string(e.to.id) + ": ZRSV differs from its SOF aggregation");
        }
        return;
      }
    }
  }

  void deliver(NodeId n, const DataDeliverMsg& d) {
    auto& node = nodes_[n];
    if (!node.subs.contains(d.sub_id)) {
      ++ledger_.stale_deliveries;
      return;
    }
    if (!received_.insert({d.pub_id, d.sub_id}).second) {
      ++ledger_.duplicate_deliveries;
      return;
    }
    ++ledger_.unique_deliveries;
    trace_.deliveries.push_back({d.pub_id, d.sub_id, now_});
    // Matching latency runs from the later of the two arrivals.
    const double tp = pub_times_.at(d.pub_id);
    const double ts = sub_start_.at(d.sub_id).start;
    const double latency = now_ - std::max(tp, ts);
    if (auto& p = pub_start_.at(d.pub_id); !p.matched) {
      p.matched = true;
      ledger_.pub_latency.push_back({d.pub_id, latency});
    }
    if (auto& s = sub_start_.at(d.sub_id); !s.matched) {
      s.matched = true;
      ledger_.sub_latency.push_back({d.sub_id, latency});
    }
  }

  void handle(EvSample&) {
    std::vector<std::size_t> bytes(nodes_.size(), 0);
    std::vector<bool> broker(nodes_.size(), false);
    for (const auto& slot : grids_) {
      // An empty grid's state is parked at its zone manager's host.
      if (auto h = host_of(Endpoint::grid(slot.gm.grid()))) {
        bytes[*h] += slot.gm.storage_bytes();
        broker[*h] = true;
      }
    }
    for (const auto& slot : zones_) {
      if (slot.host) {
        bytes[*slot.host] += slot.zm.storage_bytes();
        broker[*slot.host] = true;
      }
    }
    StorageSample s;
    s.time = now_;
    double broker_sum = 0.0, other_sum = 0.0;
    std::size_t others = 0;
    for (NodeId n = 0; n < nodes_.size(); ++n) {
      std::size_t own = kNodeBaseBytes;
      for (const auto& [id, sub] : nodes_[n].subs) own += encoded_size(SubFilter(sub));
      bytes[n] += own;
      if (broker[n]) {
        broker_sum += static_cast<double>(bytes[n]);
        ++s.brokers;
      } else {
        other_sum += static_cast<double>(bytes[n]);
        ++others;
      }
    }
    double total = broker_sum + other_sum;
    s.broker_mean = s.brokers ? broker_sum / static_cast<double>(s.brokers) : 0.0;
    s.nonbroker_mean = others ? other_sum / static_cast<double>(others) : 0.0;
    s.node_mean = total / static_cast<double>(nodes_.size());
    double naive_sum = 0.0;
    std::size_t naive_brokers = 0;
    for (const auto& slot : zones_) {
      if (!slot.host) continue;
      naive_sum += static_cast<double>(slot.naive.storage_bytes());
      ++naive_brokers;
    }
    s.naive_broker_mean = naive_brokers ? naive_sum / static_cast<double>(naive_brokers) : 0.0;
    ledger_.storage.push_back(s);
    if (now_ + cfg_.storage_sample <= end_time_) push(now_ + cfg_.storage_sample, EvSample{});
  }

  void handle(EvExpire&) {
    for (auto& slot : zones_) slot.zm.expire(now_);
    if (now_ + cfg_.expire_period <= end_time_) push(now_ + cfg_.expire_period, EvExpire{});
  }

  void check_membership() const {
    for (NodeId n = 0; n < nodes_.size(); ++n) {
      const auto& node = nodes_[n];
      if (!geo_.in_area(node.mob.pos)) throw InvariantError("node " + std::to_string(n) + " left the area");
      if (geo_.grid_of(node.mob.pos) != node.grid || !grids_[node.grid].members.contains(n)) {
        throw InvariantError("node " + std::to_string(n) + " has stale grid membership");
      }
    }
  }

  void finish() {
    trace_.end_time = end_time_;
    for (auto& s : trace_.subs) s.end = std::min(s.end, end_time_);
    ledger_.oracle = classify(trace_);
  }

  SimConfig cfg_;
  Geometry geo_;
  SchemaRegistry schema_;
  RandomWaypoint mobility_;
  std::mt19937_64 mobility_rng_;
  std::vector<NodeState> nodes_;
  std::vector<GridSlot> grids_;
  std::vector<ZoneSlot> zones_;
  std::vector<std::vector<GridId>> zone_grids_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
  double end_time_ = 0.0;
  bool ran_ = false;
  bool fault_done_ = false;
  std::map<std::pair<Endpoint, Endpoint>, double> channel_;

  std::map<SubId, NodeId> sub_owner_;
  std::map<SubId, std::size_t> sub_trace_;
  std::map<SubId, PairTimes> sub_start_;
  std::map<PubId, PairTimes> pub_start_;
  std::map<PubId, double> pub_times_;
  std::set<std::pair<PubId, SubId>> received_;
  std::size_t grsv_updates_ = 0;
  std::size_t subscription_changes_ = 0;

  MetricsLedger ledger_;
  Trace trace_;
};

// Full run of the configured random workload.
inline MetricsLedger run(const SimConfig& cfg) {
  Simulator sim(cfg);
  sim.schedule_workload();
  return sim.run();
}

}  // namespace brvst
