#pragma once

// Parameter sweeps over SimConfig keys, per-point aggregation and the trend
// detectors used to judge curve shapes.

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "brvst/config.hpp"
#include "brvst/metrics.hpp"
#include "brvst/simulator.hpp"

namespace brvst {

// Text form, one key=value per line:
//   base=<config path>   (optional; defaults when absent)
//   param=<SimConfig key>
//   values=<v1>,<v2>,...
//   reps=<n>             (seeds base.seed .. base.seed+n-1)
//   out=<directory>
// Lines `set <key>=<value>` override the base config.
struct SweepSpec {
  std::string base;
  std::string param;
  std::vector<std::string> values;
  int reps = 1;
  std::string out = ".";
  std::vector<std::pair<std::string, std::string>> overrides;
};

inline void validate(const SweepSpec& s) {
  if (!has_config_key(s.param)) throw ConfigError("swept parameter '" + s.param + "' is not a config key");
  if (s.param == "seed") throw ConfigError("seed cannot be swept; use reps");
  if (s.values.empty()) throw ConfigError("sweep value list is empty");
  if (s.reps < 1) throw ConfigError("reps must be >= 1");
}

inline SweepSpec parse_sweep(std::istream& in) {
  SweepSpec s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    bool is_set = false;
    if (line.rfind("set ", 0) == 0) {
      is_set = true;
      line = detail::trim(line.substr(4));
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep line " + std::to_string(lineno) + ": expected key=value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (is_set) {
      if (!has_config_key(key)) throw ConfigError("unknown config key '" + key + "'");
      s.overrides.emplace_back(key, value);
    } else if (key == "base") {
      s.base = value;
    } else if (key == "param") {
      s.param = value;
    } else if (key == "values") {
      std::istringstream vs(value);
      std::string v;
      while (std::getline(vs, v, ',')) {
        v = detail::trim(v);
        if (!v.empty()) s.values.push_back(v);
      }
    } else if (key == "reps") {
      detail::parse_value(key, value, s.reps);
    } else if (key == "out") {
      s.out = value;
    } else {
      throw ConfigError("unknown sweep key '" + key + "'");
    }
  }
  validate(s);
  return s;
}

inline SweepSpec load_sweep(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep spec '" + path + "'");
  return parse_sweep(in);
}

// Scalar metrics reported per sweep point.
struct PointMetrics {
  double pub_latency = 0.0;
  double sub_latency = 0.0;
  double match_latency = 0.0;
  double traffic_per_match = 0.0;
  double node_storage = 0.0;
  double broker_storage = 0.0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  double deliveries = 0.0;

  static PointMetrics from(const MetricsLedger& l) {
    return {l.mean_pub_latency(),  l.mean_sub_latency(),    l.mean_match_latency(),
            l.traffic_per_match(), l.mean_node_storage(),   l.mean_broker_storage(),
            l.oracle.fp_rate(),    l.oracle.fn_rate(),      static_cast<double>(l.unique_deliveries)};
  }
};

inline const std::vector<std::pair<const char*, double PointMetrics::*>>& point_columns() {
  static const std::vector<std::pair<const char*, double PointMetrics::*>> cols = {
      {"pub_latency", &PointMetrics::pub_latency},
      {"sub_latency", &PointMetrics::sub_latency},
      {"match_latency", &PointMetrics::match_latency},
      {"traffic_per_match", &PointMetrics::traffic_per_match},
      {"node_storage", &PointMetrics::node_storage},
      {"broker_storage", &PointMetrics::broker_storage},
      {"fp_rate", &PointMetrics::fp_rate},
      {"fn_rate", &PointMetrics::fn_rate},
      {"deliveries", &PointMetrics::deliveries},
  };
  return cols;
}

struct SweepRow {
  std::string value;
  int rep = 0;
  std::uint64_t seed = 0;
  PointMetrics metrics;
};

struct SweepSummary {
  std::string value;
  PointMetrics mean;
  PointMetrics stddev;
};

inline std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows, const std::vector<std::string>& values) {
  std::vector<SweepSummary> out;
  for (const auto& v : values) {
    SweepSummary s;
    s.value = v;
    std::vector<const PointMetrics*> pts;
    for (const auto& r : rows) {
      if (r.value == v) pts.push_back(&r.metrics);
    }
    if (pts.empty()) continue;
    for (const auto& [name, field] : point_columns()) {
      double sum = 0.0;
      for (const auto* p : pts) sum += p->*field;
      const double mean = sum / static_cast<double>(pts.size());
      double var = 0.0;
      for (const auto* p : pts) var += (p->*field - mean) * (p->*field - mean);
      s.mean.*field = mean;
      s.stddev.*field = pts.size() > 1 ? std::sqrt(var / static_cast<double>(pts.size() - 1)) : 0.0;
    }
    out.push_back(s);
  }
  return out;
}

// Number of adjacent pairs where the series rises (strictly).
inline int count_increases(const std::vector<double>& ys) {
  int n = 0;
  for (std::size_t i = 1; i < ys.size(); ++i) n += ys[i] > ys[i - 1] ? 1 : 0;
  return n;
}

inline bool non_increasing(const std::vector<double>& ys, int allowed_inversions = 0) {
  return count_increases(ys) <= allowed_inversions;
}

// True when the smallest value is strictly below both endpoints.
inline bool interior_minimum(const std::vector<double>& ys) {
  if (ys.size() < 3) return false;
  std::size_t best = 0;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (ys[i] < ys[best]) best = i;
  }
  return best != 0 && best != ys.size() - 1 && ys[best] < ys.front() && ys[best] < ys.back();
}

inline SimConfig sweep_point_config(const SweepSpec& spec, const SimConfig& base, const std::string& value, int rep) {
  SimConfig cfg = base;
  for (const auto& [k, v] : spec.overrides) set_config_value(cfg, k, v);
  set_config_value(cfg, spec.param, value);
  cfg.seed = base.seed + static_cast<std::uint64_t>(rep);
  validate(cfg);
  return cfg;
}

inline void write_sweep_rows(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  out << "# brvst-sweep v1\n# param=" << spec.param << '\n';
  out << "value,rep,seed";
  for (const auto& [name, field] : point_columns()) out << ',' << name;
  out << '\n';
  for (const auto& r : rows) {
    out << r.value << ',' << r.rep << ',' << r.seed;
    for (const auto& [name, field] : point_columns()) out << ',' << detail::fmt_double(r.metrics.*field);
    out << '\n';
  }
}

inline void write_sweep_summary(std::ostream& out, const SweepSpec& spec, const std::vector<SweepSummary>& sums) {
  out << "# brvst-sweep-summary v1\n# param=" << spec.param << "\n# reps=" << spec.reps << '\n';
  out << "value";
  for (const auto& [name, field] : point_columns()) out << ',' << name << "_mean," << name << "_sd";
  out << '\n';
  for (const auto& s : sums) {
    out << s.value;
    for (const auto& [name, field] : point_columns()) {
      out << ',' << detail::fmt_double(s.mean.*field) << ',' << detail::fmt_double(s.stddev.*field);
    }
    out << '\n';
  }
}

// Trend verdicts over the per-value means.
inline void write_trend_report(std::ostream& out, const std::vector<SweepSummary>& sums) {
  for (const auto& [name, field] : point_columns()) {
    std::vector<double> ys;
    for (const auto& s : sums) ys.push_back(s.mean.*field);
    out << name << ": increases=" << count_increases(ys)
        << " non_increasing=" << (non_increasing(ys) ? "yes" : "no")
        << " interior_minimum=" << (interior_minimum(ys) ? "yes" : "no") << '\n';
  }
}

}  // namespace brvst
