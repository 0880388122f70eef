#include "dragoncast/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dragoncast/config_file.hpp"
#include "dragoncast/sim/trace.hpp"

namespace fs = std::filesystem;

namespace dragoncast {

namespace {

std::vector<Preset> make_presets() {
  std::vector<Preset> out;

  {
    Preset p;
    p.name = "two-node-smoke";
    p.description = "two static nodes in range; fastest end-to-end check";
    SimConfig& c = p.config;
    c.n_nodes = 2;
    c.placement = Placement::line;
    c.line_spacing = 100;
    c.generation_size = 20;
    c.window = 8;
    c.payload_size = 32;
    c.horizon = 30;
    c.sample_period = 0.5;
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "line-static";
    p.description = "sparse static 10-node line with 20% loss; multi-hop relaying";
    SimConfig& c = p.config;
    c.n_nodes = 10;
    c.placement = Placement::line;
    c.line_spacing = 200;
    c.loss_probability = 0.2;
    c.generation_size = 50;
    c.window = 10;
    c.policy = "dragon";
    c.dragon_alpha = 0.5;
    c.horizon = 600;
    out.push_back(p);
  }

  const auto mobile = [](double speed) {
    SimConfig c;
    c.speed_min = speed;
    c.speed_max = speed;
    c.loss_probability = 0.1;
    c.horizon = 120;
    return c;
  };
  // The iron pair contrasts real-time decoding with and without the sliding
  // window on a contended channel (collisions + jitter emulate MAC losses).
  const auto iron_mobile = [&] {
    SimConfig c = mobile(15);
    c.loss_probability = 0.2;
    c.collision_model = CollisionModel::overlap;
    c.jitter = 0.05;
    return c;
  };
  {
    Preset p;
    p.name = "mobile-iron-sew";
    p.description = "30 mobile nodes, uniform rates, sliding window K=20";
    p.config = iron_mobile();
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "mobile-iron-nosew";
    p.description = "as mobile-iron-sew but the window spans the whole generation";
    p.config = iron_mobile();
    p.config.window = p.config.generation_size;
    out.push_back(p);
  }
  // The dragon pair contrasts the efficiency cost of the sliding window
  // under gap-driven rates; alpha = 3 keeps gap closure faster than the
  // window advance so the window is the only variable.
  const auto dragon_mobile = [&] {
    SimConfig c = mobile(15);
    c.policy = "dragon";
    c.dragon_alpha = 3.0;
    return c;
  };
  {
    Preset p;
    p.name = "mobile-dragon-sew";
    p.description = "30 mobile nodes, gap-driven rates, sliding window K=20";
    p.config = dragon_mobile();
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "mobile-dragon-nosew";
    p.description = "as mobile-dragon-sew but the window spans the whole generation";
    p.config = dragon_mobile();
    p.config.window = p.config.generation_size;
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "paced-source";
    p.description = "fast mobility, gap-driven rates, source paced at 9 pkt/s";
    p.config = mobile(33);
    p.config.policy = "dragon";
    p.config.dragon_alpha = 0.2;
    p.config.source_rate = 9;
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "dense-static";
    p.description = "30 static nodes scattered in one radio footprint";
    SimConfig& c = p.config;
    c.loss_probability = 0.1;
    c.horizon = 120;
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "stress-mobility";
    p.description = "extreme mobility: 2.7 radio ranges per second (675 m/s)";
    p.config = mobile(675);
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "rough-channel";
    p.description = "30% loss, overlap collisions, 10% timer jitter, 33 m/s";
    p.config = mobile(33);
    SimConfig& c = p.config;
    c.loss_probability = 0.3;
    c.collision_model = CollisionModel::overlap;
    c.policy = "dragon";
    c.dragon_alpha = 3.0;
    c.jitter = 0.1;
    c.horizon = 180;
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "full-scale";
    p.description = "full-size fleet: 200 nodes, 1.1 km field, 1000 packets, "
                    "512 B on air, K=100, 675 m/s";
    SimConfig& c = p.config;
    c.n_nodes = 200;
    c.field_width = 1100;
    c.field_height = 1100;
    c.speed_min = 675;
    c.speed_max = 675;
    c.loss_probability = 0.1;
    c.generation_size = 1000;
    c.window = 100;
    c.payload_size = 484;  // 512 B data packets once coding headers are added
    c.horizon = 300;
    out.push_back(p);
  }

  for (const auto& p : out) {
    const auto problems = validate_config(p.config);
    if (!problems.empty())
      throw std::logic_error("preset " + p.name + " is invalid: " + problems.front());
  }
  return out;
}

void ensure_out_dir(const std::string& out_dir, bool force) {
  const fs::path dir(out_dir);
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir))
      throw std::runtime_error(out_dir + " exists and is not a directory");
    if (!fs::is_empty(dir) && !force)
      throw std::runtime_error("output directory " + out_dir +
                               " is not empty (use --force to overwrite)");
  } else {
    fs::create_directories(dir);
  }
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string opt6(const std::optional<double>& v) { return v ? fixed6(*v) : "na"; }

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = make_presets();
  return list;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

RunArtifacts run_and_write(const SimConfig& cfg, const std::string& out_dir,
                           bool force) {
  ensure_out_dir(out_dir, force);
  Simulator sim(cfg);
  RunArtifacts art{sim.run(), {}};
  art.report = compute_metrics(art.result.trace);
  const fs::path dir(out_dir);
  write_text_file((dir / "trace.log").string(), write_trace(art.result.trace));
  write_text_file((dir / "series.csv").string(), write_series_csv(art.report.series));
  write_text_file((dir / "summary.txt").string(), write_summary(art.report.summary));
  write_text_file((dir / "config.ini").string(), save_config(cfg));
  return art;
}

SweepOutcome run_sweep(const SweepSpec& spec, const std::string& out_dir,
                       bool force) {
  if (spec.seeds.empty())
    throw std::invalid_argument("sweep needs at least one seed");
  for (const auto& ax : spec.axes)
    if (ax.values.empty())
      throw std::invalid_argument("axis " + ax.key + " has no values");

  // Cartesian product of axis values, first axis slowest.
  std::vector<std::vector<std::string>> combos{{}};
  for (const auto& ax : spec.axes) {
    std::vector<std::vector<std::string>> next;
    next.reserve(combos.size() * ax.values.size());
    for (const auto& combo : combos)
      for (const auto& v : ax.values) {
        next.push_back(combo);
        next.back().push_back(v);
      }
    combos = std::move(next);
  }

  struct Job {
    SimConfig cfg;
    std::string dir;
    std::vector<std::string> values;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& combo : combos) {
    SimConfig cell_cfg = spec.base;
    std::string cell_name;
    for (std::size_t i = 0; i < combo.size(); ++i) {
      apply_override(cell_cfg, spec.axes[i].key, combo[i]);  // throws on bad key/value
      if (i) cell_name += ',';
      cell_name += spec.axes[i].key + "=" + combo[i];
    }
    if (cell_name.empty()) cell_name = "base";
    for (const std::uint64_t seed : spec.seeds) {
      Job job{cell_cfg, cell_name + "/seed-" + std::to_string(seed), combo, seed};
      job.cfg.seed = seed;
      jobs.push_back(std::move(job));
    }
  }

  ensure_out_dir(out_dir, force);

  std::vector<SweepCell> results(jobs.size());
  std::atomic<std::size_t> cursor{0};
  const auto work = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      SweepCell cell;
      cell.dir = job.dir;
      cell.values = job.values;
      cell.seed = job.seed;
      try {
        RunArtifacts art =
            run_and_write(job.cfg, (fs::path(out_dir) / job.dir).string(), force);
        cell.summary = art.report.summary;
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      results[i] = std::move(cell);
    }
  };

  const unsigned workers = std::max(1u, spec.workers);
  if (workers == 1 || jobs.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const unsigned n = std::min<std::size_t>(workers, jobs.size());
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SweepOutcome outcome;
  outcome.cells = std::move(results);
  for (const auto& c : outcome.cells) outcome.any_failed |= !c.ok;

  const fs::path root(out_dir);
  write_text_file((root / "sweep_summary.csv").string(),
                  write_sweep_csv(spec, outcome.cells));
  write_text_file((root / "sweep_means.csv").string(),
                  write_sweep_means_csv(spec, outcome.cells));
  write_text_file((root / "sweep_base.ini").string(), save_config(spec.base));
  return outcome;
}

std::string write_sweep_csv(const SweepSpec& spec,
                            const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "cell,seed,status";
  for (const auto& ax : spec.axes) out << ',' << ax.key;
  out << ",converged,all_stopped,data_tx,ctrl_tx,total_tx,e_cost,e_cost_data,"
         "e_bound,e_ref_eff,m_avg_max,rtd_mid80,high_rank_gap_mid80,"
         "end_time_s,termination_time_s,min_final_rank,error\n";
  for (const auto& c : cells) {
    out << csv_safe(c.dir) << ',' << c.seed << ',' << (c.ok ? "ok" : "error");
    for (const auto& v : c.values) out << ',' << csv_safe(v);
    if (c.ok) {
      const RunSummary& s = c.summary;
      out << ',' << (s.converged ? "true" : "false") << ','
          << (s.all_stopped ? "true" : "false") << ',' << s.data_tx << ','
          << s.ctrl_tx << ',' << s.total_tx << ',' << fixed6(s.e_cost) << ','
          << fixed6(s.e_cost_data) << ',' << opt6(s.e_bound) << ','
          << opt6(s.e_ref_eff) << ',' << fixed6(s.m_avg_max) << ','
          << opt6(s.rtd_mid80) << ',' << opt6(s.high_rank_gap_mid80) << ','
          << fixed6(micros_to_seconds(s.end_time)) << ','
          << (s.termination_time
                  ? fixed6(micros_to_seconds(*s.termination_time))
                  : std::string("na"))
          << ',' << s.min_final_rank << ",\n";
    } else {
      for (int i = 0; i < 15; ++i) out << ",na";
      out << ',' << csv_safe(c.error) << '\n';
    }
  }
  return out.str();
}

std::string write_sweep_means_csv(const SweepSpec& spec,
                                  const std::vector<SweepCell>& cells) {
  struct Acc {
    std::vector<std::string> values;
    std::uint32_t runs = 0, ok = 0, converged = 0;
    double e_cost = 0;
    // optional scalars: sum + count of runs where present
    double e_bound = 0, e_ref_eff = 0, rtd = 0, gap = 0, term = 0;
    std::uint32_t n_bound = 0, n_ref = 0, n_rtd = 0, n_gap = 0, n_term = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> by_cell;
  for (const auto& c : cells) {
    const std::string key =
        c.dir.substr(0, c.dir.find("/seed-"));
    if (!by_cell.count(key)) order.push_back(key);
    Acc& a = by_cell[key];
    a.values = c.values;
    ++a.runs;
    if (!c.ok) continue;
    ++a.ok;
    const RunSummary& s = c.summary;
    if (s.converged) ++a.converged;
    a.e_cost += s.e_cost;
    if (s.e_bound) { a.e_bound += *s.e_bound; ++a.n_bound; }
    if (s.e_ref_eff) { a.e_ref_eff += *s.e_ref_eff; ++a.n_ref; }
    if (s.rtd_mid80) { a.rtd += *s.rtd_mid80; ++a.n_rtd; }
    if (s.high_rank_gap_mid80) { a.gap += *s.high_rank_gap_mid80; ++a.n_gap; }
    if (s.termination_time) {
      a.term += micros_to_seconds(*s.termination_time);
      ++a.n_term;
    }
  }

  const auto mean = [](double sum, std::uint32_t n) -> std::string {
    return n ? fixed6(sum / n) : "na";
  };

  std::ostringstream out;
  out << "cell";
  for (const auto& ax : spec.axes) out << ',' << ax.key;
  out << ",runs,ok_runs,converged_frac,e_cost_mean,e_bound_mean,"
         "e_ref_eff_mean,rtd_mid80_mean,high_rank_gap_mid80_mean,"
         "termination_time_mean_s\n";
  for (const auto& key : order) {
    const Acc& a = by_cell.at(key);
    out << csv_safe(key);
    for (const auto& v : a.values) out << ',' << csv_safe(v);
    out << ',' << a.runs << ',' << a.ok << ','
        << (a.ok ? fixed6(static_cast<double>(a.converged) / a.ok) : "na")
        << ',' << mean(a.e_cost, a.ok) << ',' << mean(a.e_bound, a.n_bound)
        << ',' << mean(a.e_ref_eff, a.n_ref) << ',' << mean(a.rtd, a.n_rtd)
        << ',' << mean(a.gap, a.n_gap) << ',' << mean(a.term, a.n_term)
        << '\n';
  }
  return out.str();
}

MetricsReport replay_metrics(const std::string& trace_path,
                             std::uint32_t cadence_multiple) {
  return compute_metrics(parse_trace(read_text_file(trace_path)),
                         cadence_multiple);
}

}  // namespace dragoncast
