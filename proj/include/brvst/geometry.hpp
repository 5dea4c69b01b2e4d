#pragma once

// Virtual grid/zone layout computed from positions relative to the origin.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "brvst/config.hpp"
#include "brvst/error.hpp"
#include "brvst/wire.hpp"

namespace brvst {

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct GridCoord {
  int gx = 0;
  int gy = 0;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

class Geometry {
 public:
  explicit Geometry(const SimConfig& cfg)
      : width_(cfg.area_width),
        height_(cfg.area_height),
        side_(cfg.grid_side),
        k_(cfg.zone_grids),
        grids_x_(static_cast<int>(std::lround(cfg.area_width / cfg.grid_side))),
        grids_y_(static_cast<int>(std::lround(cfg.area_height / cfg.grid_side))),
        zones_x_((grids_x_ + k_ - 1) / k_),
        zones_y_((grids_y_ + k_ - 1) / k_) {}

  int grids_x() const noexcept { return grids_x_; }
  int grids_y() const noexcept { return grids_y_; }
  int zones_x() const noexcept { return zones_x_; }
  int zones_y() const noexcept { return zones_y_; }
  std::size_t grid_count() const noexcept { return static_cast<std::size_t>(grids_x_ * grids_y_); }
  std::size_t zone_count() const noexcept { return static_cast<std::size_t>(zones_x_ * zones_y_); }

  bool in_area(Position p) const noexcept {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width_ && p.y <= height_;
  }

  // (floor(x/g), floor(y/g)); the far edges belong to the last row/column.
  GridCoord grid_coord(Position p) const {
    if (!in_area(p)) {
      throw GeometryError("position (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") outside area");
    }
    const int gx = std::min(static_cast<int>(std::floor(p.x / side_)), grids_x_ - 1);
    const int gy = std::min(static_cast<int>(std::floor(p.y / side_)), grids_y_ - 1);
    return {gx, gy};
  }

  GridId grid_id(GridCoord c) const { return static_cast<GridId>(c.gy * grids_x_ + c.gx); }
  GridCoord coord_of(GridId g) const {
    return {static_cast<int>(g) % grids_x_, static_cast<int>(g) / grids_x_};
  }

  GridId grid_of(Position p) const { return grid_id(grid_coord(p)); }

  // (floor(gx/k), floor(gy/k)).
  GridCoord zone_coord(GridId g) const {
    const auto c = coord_of(g);
    return {c.gx / k_, c.gy / k_};
  }
  ZoneId zone_id(GridCoord zc) const { return static_cast<ZoneId>(zc.gy * zones_x_ + zc.gx); }
  ZoneId zone_of(GridId g) const { return zone_id(zone_coord(g)); }

  Position grid_center(GridId g) const {
    const auto c = coord_of(g);
    return {(c.gx + 0.5) * side_, (c.gy + 0.5) * side_};
  }

  // Center of the zone's area, clipped to the grids it actually contains.
  Position zone_center(ZoneId z) const {
    const int zx = static_cast<int>(z) % zones_x_;
    const int zy = static_cast<int>(z) / zones_x_;
    const double x0 = zx * k_ * side_;
    const double y0 = zy * k_ * side_;
    const double x1 = std::min(width_, (zx + 1) * k_ * side_);
    const double y1 = std::min(height_, (zy + 1) * k_ * side_);
    return {(x0 + x1) / 2, (y0 + y1) / 2};
  }

  std::vector<GridId> grids_of_zone(ZoneId z) const {
    std::vector<GridId> out;
    for (GridId g = 0; g < grid_count(); ++g) {
      if (zone_of(g) == z) out.push_back(g);
    }
    return out;
  }

  // Zones within Chebyshev zone-hop distance `radius`, excluding z itself.
  std::vector<ZoneId> zones_within(ZoneId z, int radius) const {
    const int zx = static_cast<int>(z) % zones_x_;
    const int zy = static_cast<int>(z) / zones_x_;
    std::vector<ZoneId> out;
    for (int y = std::max(0, zy - radius); y <= std::min(zones_y_ - 1, zy + radius); ++y) {
      for (int x = std::max(0, zx - radius); x <= std::min(zones_x_ - 1, zx + radius); ++x) {
        if (x == zx && y == zy) continue;
        out.push_back(zone_id({x, y}));
      }
    }
    return out;
  }

  std::vector<ZoneId> neighbors(ZoneId z) const { return zones_within(z, 1); }

 private:
  double width_, height_, side_;
  int k_;
  int grids_x_, grids_y_, zones_x_, zones_y_;
};

struct RouteCost {
  int hops = 1;
  double latency = 0.0;
  std::uint64_t traffic = 0;
};

// Hop-count abstraction of geographic unicast. Multicast is charged as
// independent unicasts.
inline RouteCost route_cost(Position src, Position dst, std::size_t msg_bytes, double tx_range,
                            double per_hop_latency, std::uint32_t header_bytes) {
  const int hops = std::max(1, static_cast<int>(std::ceil(distance(src, dst) / tx_range)));
  return {hops, hops * per_hop_latency, static_cast<std::uint64_t>(hops) * (header_bytes + msg_bytes)};
}

inline RouteCost route_cost(Position src, Position dst, std::size_t msg_bytes, const SimConfig& cfg) {
  return route_cost(src, dst, msg_bytes, cfg.tx_range, cfg.per_hop_latency, cfg.header_bytes);
}

}  // namespace brvst
