#pragma once

#include "dragoncast/rng.hpp"
#include "dragoncast/types.hpp"

namespace dragoncast {

// Random waypoint movement for one node: pick a uniform destination in the
// field, travel to it at a uniform speed from [speed_min, speed_max], pause,
// repeat. Legs are generated lazily from the node's own RNG substream, so a
// position query never disturbs any other node's randomness. Queries must be
// time-monotone (event-driven simulation guarantees this).
class WaypointMobility {
 public:
  WaypointMobility(Rng rng, double width, double height, double speed_min,
                   double speed_max, double pause_time, Vec2 start);

  Vec2 position(Micros t);

 private:
  void next_leg();

  Rng rng_;
  double width_, height_;
  double speed_min_, speed_max_;
  Micros pause_;
  bool moving_;     // static nodes (speed_max == 0) never generate legs

  Vec2 from_;
  Vec2 to_;
  Micros depart_ = 0;
  Micros arrive_ = 0;
  Micros last_query_ = 0;
};

}  // namespace dragoncast
