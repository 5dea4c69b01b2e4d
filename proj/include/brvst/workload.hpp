#pragma once

// Poisson publication/subscription arrivals from uniformly chosen nodes. Each
// event carries attrs_min..attrs_max distinct attributes drawn uniformly from
// the schema, with ranges uniform inside the attribute's limit.

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "brvst/config.hpp"
#include "brvst/event.hpp"

namespace brvst {

struct TimedSubscription {
  double time = 0.0;
  Subscription sub;
};

struct TimedPublication {
  double time = 0.0;
  Publication pub;
};

using WorkloadEvent = std::variant<TimedSubscription, TimedPublication>;

inline double event_time(const WorkloadEvent& e) {
  return std::visit([](const auto& x) { return x.time; }, e);
}

class WorkloadGenerator {
 public:
  WorkloadGenerator(const SimConfig& cfg, const SchemaRegistry& schema, std::uint64_t seed, double start = 0.0)
      : cfg_(cfg), arv_(cfg.arv()), schema_(schema), ids_(schema.ids()), rng_(seed) {
    next_sub_ = start + gap(cfg_.sub_rate);
    next_pub_ = start + gap(cfg_.pub_rate);
  }

  // Next event in time order (ties: subscription first), or nothing once both
  // streams pass `until`.
  std::optional<WorkloadEvent> next(double until) {
    const double t = std::min(next_sub_, next_pub_);
    if (!(t <= until)) return std::nullopt;
    std::uniform_int_distribution<int> pick_node(0, cfg_.nodes - 1);
    if (next_sub_ <= next_pub_) {
      const NodeId node = static_cast<NodeId>(pick_node(rng_));
      TimedSubscription ev{t, Subscription(next_sub_id_++, node, draw_attrs(false))};
      next_sub_ = t + gap(cfg_.sub_rate);
      return ev;
    }
    const NodeId node = static_cast<NodeId>(pick_node(rng_));
    TimedPublication ev{t, Publication(next_pub_id_++, node, draw_attrs(cfg_.pub_points), cfg_.payload_bytes)};
    next_pub_ = t + gap(cfg_.pub_rate);
    return ev;
  }

  std::vector<WorkloadEvent> generate(double until) {
    std::vector<WorkloadEvent> out;
    while (auto e = next(until)) out.push_back(std::move(*e));
    return out;
  }

 private:
  double gap(double per_minute) {
    if (per_minute <= 0.0) return std::numeric_limits<double>::infinity();
    std::exponential_distribution<double> d(per_minute / 60.0);
    return d(rng_);
  }

  std::vector<AttributeInstance> draw_attrs(bool points) {
    std::uniform_int_distribution<int> count(cfg_.attrs_min, cfg_.attrs_max);
    const int k = count(rng_);
    std::vector<AttrId> pool = ids_;
    std::vector<AttributeInstance> out;
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), pool.size() - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng_)]);
      const AttrId id = pool[static_cast<std::size_t>(i)];
      const auto& limit = schema_.at(id).limit;
      std::uniform_real_distribution<double> u(limit.min, limit.max);
      double a = u(rng_);
      double b = points ? a : u(rng_);
      if (a > b) std::swap(a, b);
      out.push_back(make_attribute(schema_, arv_, id, {a, b}));
    }
    return out;
  }

  SimConfig cfg_;
  ArvConfig arv_;
  const SchemaRegistry& schema_;
  std::vector<AttrId> ids_;
  std::mt19937_64 rng_;
  double next_sub_ = 0.0;
  double next_pub_ = 0.0;
  SubId next_sub_id_ = 1;
  PubId next_pub_id_ = 1;
};

}  // namespace brvst
