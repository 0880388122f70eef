#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dragoncast/sim/trace.hpp"

namespace dragoncast {

// Everything below is a pure function of a TraceLog, so a persisted trace
// reproduces the original summary byte-for-byte.

// Per-sample-time aggregates across nodes.
struct SeriesPoint {
  Micros t = 0;
  double avg_rank = 0;
  std::uint16_t min_rank = 0;
  double avg_high_index = 0;
  std::uint16_t min_high_index = 0;
  std::uint16_t source_revealed = 0;
  double avg_rtd = 0;        // over nodes with rank > 0; 0 when there are none
  std::uint32_t max_neighbors = 0;  // geometric in-range count
};

struct RunSummary {
  std::uint16_t n_nodes = 0;
  std::uint16_t generation_size = 0;
  std::uint64_t seed = 0;
  std::uint64_t data_tx = 0;
  std::uint64_t ctrl_tx = 0;
  std::uint64_t total_tx = 0;
  std::uint64_t total_bytes = 0;
  std::uint64_t overhead_bytes = 0;  // everything except decoded payload bytes
  double e_cost = 0;                 // transmissions (data + control) / D
  double e_cost_data = 0;            // data transmissions only / D
  std::optional<double> e_bound;     // N / M_avg-max; absent when no neighbors
  std::optional<double> e_ref_eff;   // e_bound / e_cost
  double m_avg_max = 0;
  std::optional<double> rtd_mid80;   // time-averaged RTD over the middle 80%
  std::optional<double> high_rank_gap_mid80;  // mean |avg I_high - avg rank|
  bool converged = false;            // every node ended at full rank
  bool all_stopped = false;          // every node ended in Stopped
  Micros end_time = 0;
  std::optional<Micros> termination_time;  // time the last node stopped
  std::uint16_t min_final_rank = 0;
  std::uint32_t cadence_multiple = 1;
};

struct MetricsReport {
  std::vector<SeriesPoint> series;
  RunSummary summary;
};

// Portion of the encoding cost E_cost = transmissions / D.
double e_cost(std::uint64_t transmissions, std::uint16_t generation_size);

// Efficiency bound E_bound = N / M_avg-max.
double e_bound(std::uint16_t n_nodes, double m_avg_max);

// Reference efficiency E_ref-eff = E_bound / E_cost, in (0, 1] for sane runs.
double e_ref_eff(double bound, double cost);

// Real-time decoding ratio with the 0/0 -> 1 convention.
double rtd(std::uint16_t decoded, std::uint16_t rank);

// Upper bound on broadcast-vs-routing efficiency in disk graphs,
// 6*pi / (2*pi + 3*sqrt(3)).
double routing_bound();

// cadence_multiple > 1 keeps only every k-th sample time (documented as
// non-comparable with the original cadence in the summary).
MetricsReport compute_metrics(const TraceLog& log, std::uint32_t cadence_multiple = 1);

std::string write_series_csv(const std::vector<SeriesPoint>& series);
std::string write_summary(const RunSummary& summary);

}  // namespace dragoncast
