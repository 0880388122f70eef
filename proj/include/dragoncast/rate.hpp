#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "dragoncast/types.hpp"

namespace dragoncast {

// Everything rate selection is allowed to see: own rank and the advertised
// ranks of currently live neighbors.
struct RankView {
  std::uint16_t own_rank = 0;
  std::vector<std::uint16_t> neighbor_ranks;
};

struct FixedRate {
  double rate = 1.0;  // packets per second, every node
};

struct IronRate {
  double base_rate = 1.0;     // packets per second at relays
  double source_factor = 1.0; // M: the source transmits M times faster
};

struct DragonRate {
  double alpha = 0.5;  // gain applied to the normalized rank gap
};

using RatePolicy = std::variant<FixedRate, IronRate, DragonRate>;

// Normalized rank gap g = max_u (own - rank_u) / |H|. Zero when there are no
// live neighbors. Negative when every neighbor is strictly ahead.
double gap(const RankView& view);

// alpha * g for a positive gap; 0 otherwise (the node goes silent).
double dragon_rate(double g, double alpha);

double iron_rate(bool is_source, double base_rate, double source_factor);

double policy_rate(const RatePolicy& policy, bool is_source, const RankView& view);

// Inter-packet delay 1/rate in seconds; nullopt when the rate is <= 0.
std::optional<double> next_delay_seconds(double rate);

// Same delay in integer microseconds (never below 1 us).
std::optional<Micros> next_delay_micros(double rate);

}  // namespace dragoncast
