#pragma once

#include <cstdint>
#include <string>

#include "dragoncast/galois.hpp"
#include "dragoncast/rate.hpp"
#include "dragoncast/types.hpp"

namespace dragoncast {

enum class Placement { uniform, line };
enum class CollisionModel { off, overlap };

// One scenario, fully determined together with the seed. Distances are in
// meters, rates in packets/second, times in seconds.
struct SimConfig {
  // [sim]
  std::uint16_t n_nodes = 30;
  double field_width = 430.0;
  double field_height = 430.0;
  double radio_range = 250.0;
  Placement placement = Placement::uniform;
  double line_spacing = 200.0;       // inter-node distance for line placement
  double speed_min = 0.0;
  double speed_max = 0.0;
  double pause_time = 0.0;
  double loss_probability = 0.0;     // independent Bernoulli per receiver
  CollisionModel collision_model = CollisionModel::off;
  double bitrate = 1e6;              // bits/second, sets packet airtime
  std::size_t payload_size = 64;     // bytes per source packet
  double jitter = 0.0;               // +/- fraction on timer delays
  double horizon = 300.0;            // hard stop, seconds
  double sample_period = 1.0;        // metrics sampling cadence, seconds
  std::uint64_t seed = 1;

  // [coding]
  FieldOrder field = FieldOrder::gf2;
  std::uint16_t generation_size = 200;  // D
  std::uint16_t window = 20;            // K; window == D disables SEW

  // [protocol]
  double lifetime = 2.0;      // advertisement validity, seconds
  double source_rate = 8.867; // C_s, packets/second

  // [rate]
  std::string policy = "iron";  // fixed | iron | dragon
  double fixed_rate = 1.0;
  double iron_base_rate = 1.0;
  double iron_m = 8.867;
  double dragon_alpha = 0.5;

  RatePolicy make_policy() const;
  Micros lifetime_micros() const { return seconds_to_micros(lifetime); }
  Micros horizon_micros() const { return seconds_to_micros(horizon); }
  Micros sample_period_micros() const { return seconds_to_micros(sample_period); }
};

// Parse + range-check; throws ConfigError listing every offending field.
SimConfig load_config(const std::string& text);

// Full echo including defaulted keys, in canonical order; parsing the result
// reproduces the same config.
std::string save_config(const SimConfig& cfg);

// Collected range/consistency problems; empty means valid.
std::vector<std::string> validate_config(const SimConfig& cfg);

// Set one field by bare key name (keys are unique across sections); throws
// ConfigError for unknown keys or unparsable values.
void apply_override(SimConfig& cfg, const std::string& key, const std::string& value);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace dragoncast
