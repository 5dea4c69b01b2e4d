#pragma once

#include <random>

#include "brvst/geometry.hpp"

namespace brvst {

// Random waypoint with a strictly positive minimum speed, which avoids the
// average-speed decay of the classic model. speed_max == 0 means static nodes.
class RandomWaypoint {
 public:
  RandomWaypoint(double width, double height, double speed_min, double speed_max, double pause)
      : width_(width), height_(height), speed_min_(speed_min), speed_max_(speed_max), pause_(pause) {}

  struct State {
    Position pos;
    Position target;
    double speed = 0.0;
    double pause_left = 0.0;
  };

  template <typename Rng>
  State initial(Rng& rng) const {
    State s;
    s.pos = random_point(rng);
    pick_leg(s, rng);
    return s;
  }

  template <typename Rng>
  void advance(State& s, double dt, Rng& rng) const {
    if (speed_max_ <= 0.0) return;
    while (dt > 0.0) {
      if (s.pause_left > 0.0) {
        const double p = std::min(dt, s.pause_left);
        s.pause_left -= p;
        dt -= p;
        if (s.pause_left > 0.0) return;
        pick_leg(s, rng);
        continue;
      }
      const double d = distance(s.pos, s.target);
      const double step = s.speed * dt;
      if (step < d) {
        s.pos.x += (s.target.x - s.pos.x) * step / d;
        s.pos.y += (s.target.y - s.pos.y) * step / d;
        return;
      }
      dt -= d / s.speed;
      s.pos = s.target;
      if (pause_ > 0.0) {
        s.pause_left = pause_;
      } else {
        pick_leg(s, rng);
      }
    }
  }

 private:
  template <typename Rng>
  Position random_point(Rng& rng) const {
    std::uniform_real_distribution<double> ux(0.0, width_), uy(0.0, height_);
    const double x = ux(rng);
    return {x, uy(rng)};
  }

  template <typename Rng>
  void pick_leg(State& s, Rng& rng) const {
    if (speed_max_ <= 0.0) {
      s.target = s.pos;
      s.speed = 0.0;
      return;
    }
    s.target = random_point(rng);
    std::uniform_real_distribution<double> us(speed_min_, speed_max_);
    s.speed = us(rng);
  }

  double width_, height_, speed_min_, speed_max_, pause_;
};

}  // namespace brvst
