#pragma once

#include <cmath>
#include <cstdint>

namespace dragoncast {

// Simulation time in integer microseconds. Integer time keeps event ordering
// exact and lets trace files round-trip byte-for-byte.
using Micros = std::int64_t;

using NodeId = std::uint16_t;

constexpr Micros kMicrosPerSecond = 1'000'000;

inline Micros seconds_to_micros(double s) {
  return static_cast<Micros>(std::llround(s * 1e6));
}

inline double micros_to_seconds(Micros us) {
  return static_cast<double>(us) / 1e6;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace dragoncast
