#include "dragoncast/sim/mobility.hpp"

#include <cmath>
#include <stdexcept>

namespace dragoncast {

WaypointMobility::WaypointMobility(Rng rng, double width, double height,
                                   double speed_min, double speed_max,
                                   double pause_time, Vec2 start)
    : rng_(rng),
      width_(width),
      height_(height),
      speed_min_(speed_min),
      speed_max_(speed_max),
      pause_(seconds_to_micros(pause_time)),
      moving_(speed_max > 0.0),
      from_(start),
      to_(start) {
  if (moving_) next_leg();
}

void WaypointMobility::next_leg() {
  // Travel begins when the previous pause ends.
  from_ = to_;
  depart_ = arrive_ + pause_;
  for (;;) {
    to_ = Vec2{rng_.uniform(0.0, width_), rng_.uniform(0.0, height_)};
    const double dist = distance(from_, to_);
    const double speed = rng_.uniform(speed_min_, speed_max_);
    if (speed <= 0.0 || dist <= 0.0) continue;  // re-draw degenerate legs
    arrive_ = depart_ + seconds_to_micros(dist / speed);
    if (arrive_ > depart_) break;
  }
}

Vec2 WaypointMobility::position(Micros t) {
  if (t < last_query_)
    throw std::logic_error("mobility queried backwards in time");
  last_query_ = t;
  if (!moving_) return from_;
  while (t >= arrive_) next_leg();
  if (t <= depart_) return from_;  // pausing at the waypoint
  const double f = static_cast<double>(t - depart_) /
                   static_cast<double>(arrive_ - depart_);
  return Vec2{from_.x + (to_.x - from_.x) * f, from_.y + (to_.y - from_.y) * f};
}

}  // namespace dragoncast
