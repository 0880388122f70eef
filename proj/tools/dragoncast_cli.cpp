// Command-line front end: run scenarios, sweep parameters, recompute metrics
// from traces, validate configs, list presets.
#include <cinttypes>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dragoncast/config_file.hpp"
#include "dragoncast/scenario.hpp"
#include "dragoncast/sim/trace.hpp"

namespace fs = std::filesystem;
using namespace dragoncast;

namespace {

SimConfig resolve_config(const std::string& preset_name,
                         const std::string& config_path,
                         const std::vector<std::string>& sets,
                         std::optional<std::uint64_t> seed) {
  SimConfig cfg;
  if (!preset_name.empty() && !config_path.empty())
    throw ConfigError({"give either --preset or --config, not both"});
  if (!preset_name.empty()) {
    const Preset* p = find_preset(preset_name);
    if (!p)
      throw ConfigError({"unknown preset '" + preset_name +
                         "' (run `dragoncast presets` for the list)"});
    cfg = p->config;
  } else if (!config_path.empty()) {
    cfg = load_config(read_text_file(config_path));
  }
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError({"--set expects key=value, got '" + s + "'"});
    apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (seed) cfg.seed = *seed;
  const auto problems = validate_config(cfg);
  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw ConfigError({"expected an unsigned integer, got '" + s + "'"});
  }
  if (used != s.size())
    throw ConfigError({"expected an unsigned integer, got '" + s + "'"});
  return v;
}

// "7", "1,2,3" or "1..10" (inclusive range).
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(parse_u64(part));
      continue;
    }
    const std::uint64_t lo = parse_u64(part.substr(0, dots));
    const std::uint64_t hi = parse_u64(part.substr(dots + 2));
    if (hi < lo)
      throw ConfigError({"seed range '" + part + "' is descending"});
    if (hi - lo > 100000)
      throw ConfigError({"seed range '" + part + "' is unreasonably large"});
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ConfigError({"no seeds given"});
  return seeds;
}

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError({"--axis expects key=v1,v2,..., got '" + text + "'"});
  SweepAxis axis;
  axis.key = text.substr(0, eq);
  axis.values = split(text.substr(eq + 1), ',');
  for (const auto& v : axis.values)
    if (v.empty())
      throw ConfigError({"axis '" + axis.key + "' has an empty value"});
  return axis;
}

void write_replay_outputs(const std::string& out_dir, bool force,
                          const MetricsReport& report) {
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
  write_text_file((dir / "series.csv").string(),
                  write_series_csv(report.series));
  write_text_file((dir / "summary.txt").string(),
                  write_summary(report.summary));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dragoncast: broadcast with network coding over a simulated "
               "wireless swarm"};
  app.require_subcommand(1);

  std::string preset_name, config_path, out_dir, trace_path, seeds_text = "1";
  std::vector<std::string> sets, axis_texts;
  std::optional<std::uint64_t> seed;
  bool force = false;
  unsigned workers = 1;
  std::uint32_t cadence = 1;

  auto add_config_opts = [&](CLI::App* cmd) {
    cmd->add_option("--preset", preset_name, "start from a named preset");
    cmd->add_option("--config", config_path, "start from an INI config file");
    cmd->add_option("--set", sets,
                    "override one key, e.g. --set loss_probability=0.2 (repeatable)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario");
  add_config_opts(run_cmd);
  run_cmd->add_option("--seed", seed, "RNG seed (overrides config)");
  run_cmd->add_option("--out", out_dir, "output directory")->required();
  run_cmd->add_flag("--force", force, "write into a non-empty directory");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a parameter sweep across seeds");
  add_config_opts(sweep_cmd);
  sweep_cmd->add_option("--axis", axis_texts,
                        "sweep axis key=v1,v2,... (repeatable)");
  sweep_cmd->add_option("--seeds", seeds_text,
                        "seeds: '7', '1,2,3' or '1..10' (default 1)");
  sweep_cmd->add_option("--workers", workers, "parallel worker threads");
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_cmd->add_flag("--force", force, "write into a non-empty directory");

  CLI::App* replay_cmd = app.add_subcommand(
      "replay-metrics", "recompute metrics from a trace file");
  replay_cmd->add_option("--trace", trace_path, "trace.log to read")->required();
  replay_cmd->add_option(
      "--cadence", cadence,
      "keep every k-th sample; k>1 gives coarser, non-comparable averages");
  replay_cmd->add_option("--out", out_dir,
                         "directory for series.csv + summary.txt (optional)");
  replay_cmd->add_flag("--force", force, "write into a non-empty directory");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a config file and exit");
  validate_cmd->add_option("--config", config_path, "INI config file")
      ->required();

  CLI::App* presets_cmd =
      app.add_subcommand("presets", "list the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2
  }

  try {
    if (run_cmd->parsed()) {
      const SimConfig cfg = resolve_config(preset_name, config_path, sets, seed);
      const RunArtifacts art = run_and_write(cfg, out_dir, force);
      std::cout << write_summary(art.report.summary);
      std::cout << "wrote " << out_dir << "/{trace.log,series.csv,summary.txt,config.ini}\n";
      return 0;
    }
    if (sweep_cmd->parsed()) {
      SweepSpec spec;
      spec.base = resolve_config(preset_name, config_path, sets, std::nullopt);
      for (const auto& text : axis_texts) spec.axes.push_back(parse_axis(text));
      spec.seeds = parse_seeds(seeds_text);
      spec.workers = workers;
      const SweepOutcome outcome = run_sweep(spec, out_dir, force);
      std::size_t failed = 0;
      for (const auto& c : outcome.cells)
        if (!c.ok) {
          ++failed;
          std::cerr << "failed: " << c.dir << ": " << c.error << "\n";
        }
      std::cout << outcome.cells.size() - failed << "/" << outcome.cells.size()
                << " runs succeeded; wrote " << out_dir
                << "/{sweep_summary.csv,sweep_means.csv}\n";
      return outcome.any_failed ? 3 : 0;
    }
    if (replay_cmd->parsed()) {
      const MetricsReport report = replay_metrics(trace_path, cadence);
      if (!out_dir.empty()) write_replay_outputs(out_dir, force, report);
      std::cout << write_summary(report.summary);
      return 0;
    }
    if (validate_cmd->parsed()) {
      load_config(read_text_file(config_path));  // throws ConfigError if bad
      std::cout << "ok\n";
      return 0;
    }
    if (presets_cmd->parsed()) {
      std::size_t width = 0;
      for (const auto& p : presets()) width = std::max(width, p.name.size());
      for (const auto& p : presets()) {
        std::cout << p.name << std::string(width + 2 - p.name.size(), ' ')
                  << p.description << "\n";
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TraceParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
