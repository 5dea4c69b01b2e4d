#pragma once

// Simulation scenario configuration, read from flat key=value text.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "brvst/arv.hpp"
#include "brvst/error.hpp"
#include "brvst/zone_manager.hpp"

namespace brvst {

struct SimConfig {
  // geometry
  double area_width = 1000.0;
  double area_height = 1000.0;
  double grid_side = 250.0;
  int zone_grids = 2;  // zone side, in grids
  // nodes and mobility (random waypoint with nonzero minimum speed)
  int nodes = 400;
  double tx_range = 80.0;
  double speed_min = 1.0;
  double speed_max = 9.0;
  double pause = 0.0;
  double mobility_tick = 1.0;
  // workload
  double pub_rate = 200.0;  // per minute
  double sub_rate = 200.0;  // per minute
  int schema_size = 15;
  int attrs_min = 1;
  int attrs_max = 3;
  double sub_lifetime = 300.0;
  std::uint32_t payload_bytes = 256;
  bool pub_points = false;  // publications carry point values
  // ARV construction
  double alpha = 0.9;
  int max_level = 16;
  int fixed_level = -1;  // -1: natural level selection
  // cost model
  double per_hop_latency = 0.004;
  std::uint32_t header_bytes = 32;
  double match_cost = 0.0002;  // seconds per ARV match evaluation at a manager
  // overlay
  double announce_period = 60.0;
  double cache_ttl = 120.0;
  int cache_capacity = 256;
  double zrsv_timeout = 300.0;
  bool active_search = false;
  int search_radius = 1;
  // run control
  std::uint64_t seed = 1;
  double duration = 600.0;
  double drain = 30.0;
  double storage_sample = 10.0;
  double expire_period = 10.0;
  bool check_invariants = false;
  // Test hook: the first mobility tick relocates node 0 without updating its
  // grid membership, which the invariant checks must catch.
  bool fault_stale_membership = false;

  ArvConfig arv() const {
    ArvConfig c;
    c.alpha = alpha;
    c.max_level = max_level;
    if (fixed_level >= 0) c.fixed_level = fixed_level;
    return c;
  }

  ZoneConfig zone() const {
    ZoneConfig z;
    z.announce_period = announce_period;
    z.cache_ttl = cache_ttl;
    z.cache_capacity = static_cast<std::size_t>(cache_capacity);
    z.zrsv_timeout = zrsv_timeout;
    z.active_search = active_search;
    return z;
  }
};

namespace detail {

// Binds every SimConfig key to its member; one table drives parsing,
// formatting and validation of unknown keys.
template <typename Cfg>
void for_each_field(Cfg& c, auto&& fn) {
  fn("area_width", c.area_width);
  fn("area_height", c.area_height);
  fn("grid_side", c.grid_side);
  fn("zone_grids", c.zone_grids);
  fn("nodes", c.nodes);
  fn("tx_range", c.tx_range);
  fn("speed_min", c.speed_min);
  fn("speed_max", c.speed_max);
  fn("pause", c.pause);
  fn("mobility_tick", c.mobility_tick);
  fn("pub_rate", c.pub_rate);
  fn("sub_rate", c.sub_rate);
  fn("schema_size", c.schema_size);
  fn("attrs_min", c.attrs_min);
  fn("attrs_max", c.attrs_max);
  fn("sub_lifetime", c.sub_lifetime);
  fn("payload_bytes", c.payload_bytes);
  fn("pub_points", c.pub_points);
  fn("alpha", c.alpha);
  fn("max_level", c.max_level);
  fn("fixed_level", c.fixed_level);
  fn("per_hop_latency", c.per_hop_latency);
  fn("header_bytes", c.header_bytes);
  fn("match_cost", c.match_cost);
  fn("announce_period", c.announce_period);
  fn("cache_ttl", c.cache_ttl);
  fn("cache_capacity", c.cache_capacity);
  fn("zrsv_timeout", c.zrsv_timeout);
  fn("active_search", c.active_search);
  fn("search_radius", c.search_radius);
  fn("seed", c.seed);
  fn("duration", c.duration);
  fn("drain", c.drain);
  fn("storage_sample", c.storage_sample);
  fn("expire_period", c.expire_period);
  fn("check_invariants", c.check_invariants);
  fn("fault_stale_membership", c.fault_stale_membership);
}

template <typename T>
void parse_value(const std::string& key, const std::string& text, T& out) {
  if constexpr (std::is_same_v<T, bool>) {
    if (text == "1" || text == "true") {
      out = true;
    } else if (text == "0" || text == "false") {
      out = false;
    } else {
      throw ConfigError("bad boolean for " + key + ": '" + text + "'");
    }
  } else {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ConfigError("bad value for " + key + ": '" + text + "'");
    }
    out = v;
  }
}

template <typename T>
std::string format_value(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "1" : "0";
  } else if constexpr (std::is_floating_point_v<T>) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
  } else {
    return std::to_string(v);
  }
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline bool has_config_key(const std::string& key) {
  SimConfig c;
  bool found = false;
  detail::for_each_field(c, [&](const char* k, auto&) { found = found || key == k; });
  return found;
}

inline void set_config_value(SimConfig& cfg, const std::string& key, const std::string& value) {
  bool found = false;
  detail::for_each_field(cfg, [&](const char* k, auto& field) {
    if (key == k) {
      detail::parse_value(key, value, field);
      found = true;
    }
  });
  if (!found) throw ConfigError("unknown config key '" + key + "'");
}

inline void validate(const SimConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.area_width > 0 && c.area_height > 0, "area must be positive");
  require(c.grid_side > 0, "grid_side must be positive");
  const double gx = c.area_width / c.grid_side;
  const double gy = c.area_height / c.grid_side;
  require(gx == std::floor(gx) && gy == std::floor(gy), "area must divide into whole grids");
  require(c.zone_grids >= 1, "zone_grids must be >= 1");
  require(c.nodes >= 1, "nodes must be >= 1");
  require(c.tx_range > 0, "tx_range must be positive");
  require(c.speed_min >= 0 && c.speed_max >= c.speed_min, "need 0 <= speed_min <= speed_max");
  require(c.speed_max == 0 || c.speed_min > 0, "random waypoint needs a nonzero minimum speed");
  require(c.pause >= 0 && c.mobility_tick > 0, "bad pause or mobility_tick");
  require(c.pub_rate >= 0 && c.sub_rate >= 0, "rates must be nonnegative");
  require(c.schema_size >= 1 && c.schema_size <= 65535, "schema_size out of range");
  require(c.attrs_min >= 1 && c.attrs_max >= c.attrs_min && c.attrs_max <= c.schema_size,
          "need 1 <= attrs_min <= attrs_max <= schema_size");
  require(c.sub_lifetime > 0, "sub_lifetime must be positive");
  require(c.per_hop_latency >= 0 && c.match_cost >= 0, "costs must be nonnegative");
  require(c.cache_ttl > 0 && c.cache_capacity > 0, "cache ttl and capacity must be positive");
  require(c.duration >= 0 && c.drain >= 0, "duration and drain must be nonnegative");
  require(c.storage_sample > 0 && c.expire_period > 0, "sampling periods must be positive");
  require(c.search_radius >= 1, "search_radius must be >= 1");
  validate(c.arv());
}

inline SimConfig parse_config(std::istream& in, SimConfig base = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    set_config_value(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  validate(base);
  return base;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

// Canonical text, one key=value per line in table order.
inline std::string format_config(const SimConfig& cfg, bool include_seed = true) {
  std::string out;
  SimConfig c = cfg;
  detail::for_each_field(c, [&](const char* k, auto& v) {
    if (!include_seed && std::string_view(k) == "seed") return;
    out += k;
    out += '=';
    out += detail::format_value(v);
    out += '\n';
  });
  return out;
}

// Hash of the canonical config text without the seed.
inline std::uint64_t config_hash(const SimConfig& cfg) {
  const std::string text = format_config(cfg, false);
  return fnv1a(std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace brvst
