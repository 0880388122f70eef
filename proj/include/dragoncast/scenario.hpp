#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dragoncast/metrics.hpp"
#include "dragoncast/sim/config.hpp"
#include "dragoncast/sim/simulator.hpp"

namespace dragoncast {

// Named, ready-to-run configurations covering the interesting corners of the
// parameter space (smoke test, sparse line, dense mobile fleet, paced source).
struct Preset {
  std::string name;
  std::string description;
  SimConfig config;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

// Runs one scenario and writes trace.log, series.csv, summary.txt and
// config.ini into `out_dir`. Creates the directory if needed; refuses to
// write into a non-empty directory unless `force` is set.
struct RunArtifacts {
  RunResult result;
  MetricsReport report;
};

RunArtifacts run_and_write(const SimConfig& cfg, const std::string& out_dir,
                           bool force);

// Parameter sweep: the cartesian product of the axes, each cell run once per
// seed in its own subdirectory. Cells run in parallel on `workers` threads;
// a failing cell is recorded and does not abort the rest of the sweep.
struct SweepAxis {
  std::string key;                  // bare config key, e.g. "loss_probability"
  std::vector<std::string> values;  // applied via apply_override
};

struct SweepSpec {
  SimConfig base;
  std::vector<SweepAxis> axes;
  std::vector<std::uint64_t> seeds;
  unsigned workers = 1;
};

struct SweepCell {
  std::string dir;  // subdirectory relative to the sweep root
  std::vector<std::string> values;  // one per axis, same order as spec.axes
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunSummary summary;  // valid only when ok
};

struct SweepOutcome {
  std::vector<SweepCell> cells;
  bool any_failed = false;
};

SweepOutcome run_sweep(const SweepSpec& spec, const std::string& out_dir,
                       bool force);

// Per-run rows (sweep_summary.csv) and per-cell means over the seeds that
// succeeded (sweep_means.csv).
std::string write_sweep_csv(const SweepSpec& spec,
                            const std::vector<SweepCell>& cells);
std::string write_sweep_means_csv(const SweepSpec& spec,
                                  const std::vector<SweepCell>& cells);

// Recomputes metrics from a previously written trace. With
// `cadence_multiple` > 1 only every k-th sample row feeds the series, which
// makes the derived time averages coarser; the summary records the multiple
// so such results are not mistaken for run output.
MetricsReport replay_metrics(const std::string& trace_path,
                             std::uint32_t cadence_multiple);

}  // namespace dragoncast
