// End-to-end checks of the command-line tool, driven as a subprocess.
// The binary path is injected at compile time via DRAGONCAST_CLI_PATH.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dragoncast/config_file.hpp"
#include "dragoncast/scenario.hpp"
#include "dragoncast/sim/config.hpp"

namespace fs = std::filesystem;
using namespace dragoncast;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + DRAGONCAST_CLI_PATH + "\" " + args + " 2>&1";
  CmdResult res;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
    res.output.append(buf, n);
  const int status = ::pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

// Scratch directory for this test binary; recreated fresh per name.
fs::path fresh_path(const std::string& name) {
  const fs::path root =
      fs::temp_directory_path() / ("dragoncast-cli-" + std::to_string(::getpid()));
  fs::create_directories(root);
  const fs::path p = root / name;
  fs::remove_all(p);
  return p;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("presets subcommand lists every built-in") {
  const CmdResult res = run_cli("presets");
  CHECK(res.exit_code == 0);
  for (const Preset& p : presets()) {
    CAPTURE(p.name);
    CHECK(res.output.find(p.name) != std::string::npos);
  }
}

TEST_CASE("validate accepts a sound config and names problems in a bad one") {
  const fs::path good = fresh_path("good.ini");
  write_text_file(good.string(), save_config(SimConfig{}));
  const CmdResult ok = run_cli("validate --config " + quoted(good));
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("ok") != std::string::npos);

  const fs::path bad = fresh_path("bad.ini");
  write_text_file(bad.string(), "[sim]\nloss_probability = 1.5\n");
  const CmdResult range = run_cli("validate --config " + quoted(bad));
  CHECK(range.exit_code == 2);
  CHECK(range.output.find("loss_probability") != std::string::npos);

  const fs::path typo = fresh_path("typo.ini");
  write_text_file(typo.string(), "[sim]\nn_nodez = 5\n");
  const CmdResult unknown = run_cli("validate --config " + quoted(typo));
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.output.find("n_nodez") != std::string::npos);

  // A missing file is an I/O failure, not a usage error.
  const CmdResult missing =
      run_cli("validate --config " + quoted(fresh_path("nope.ini")));
  CHECK(missing.exit_code == 1);
  CHECK(missing.output.find("cannot open") != std::string::npos);
}

TEST_CASE("run writes four artifacts and refuses to clobber without --force") {
  const fs::path out = fresh_path("run-artifacts");
  const CmdResult res =
      run_cli("run --preset two-node-smoke --out " + quoted(out));
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("# dragoncast run summary") != std::string::npos);
  for (const char* f : {"trace.log", "series.csv", "summary.txt", "config.ini"}) {
    CAPTURE(f);
    CHECK(fs::exists(out / f));
  }
  // The written summary repeats the channel-model simplification.
  const std::string summary = read_text_file((out / "summary.txt").string());
  CHECK(summary.find("# channel: unit-disk radio + bernoulli loss") !=
        std::string::npos);

  const CmdResult clobber =
      run_cli("run --preset two-node-smoke --out " + quoted(out));
  CHECK(clobber.exit_code == 1);
  CHECK(clobber.output.find("not empty") != std::string::npos);

  const CmdResult forced =
      run_cli("run --preset two-node-smoke --out " + quoted(out) + " --force");
  CHECK(forced.exit_code == 0);
}

TEST_CASE("the same seed reproduces byte-identical artifacts") {
  const fs::path a = fresh_path("rerun-a");
  const fs::path b = fresh_path("rerun-b");
  const fs::path c = fresh_path("rerun-c");
  CHECK(run_cli("run --preset two-node-smoke --seed 9 --out " + quoted(a)).exit_code == 0);
  CHECK(run_cli("run --preset two-node-smoke --seed 9 --out " + quoted(b)).exit_code == 0);
  CHECK(run_cli("run --preset two-node-smoke --seed 10 --out " + quoted(c)).exit_code == 0);

  for (const char* f : {"trace.log", "series.csv", "summary.txt", "config.ini"}) {
    CAPTURE(f);
    CHECK(read_text_file((a / f).string()) == read_text_file((b / f).string()));
  }
  CHECK(read_text_file((a / "trace.log").string()) !=
        read_text_file((c / "trace.log").string()));
}

TEST_CASE("set overrides reach the simulation and bad ones exit 2") {
  const fs::path out = fresh_path("run-overrides");
  const CmdResult res = run_cli(
      "run --preset two-node-smoke --set generation_size=12 --set window=6 "
      "--out " + quoted(out));
  CHECK(res.exit_code == 0);
  const std::string ini = read_text_file((out / "config.ini").string());
  CHECK(ini.find("generation_size = 12") != std::string::npos);
  CHECK(ini.find("window = 6") != std::string::npos);
  const std::string summary = read_text_file((out / "summary.txt").string());
  CHECK(summary.find("generation_size = 12") != std::string::npos);

  const CmdResult unknown = run_cli(
      "run --preset two-node-smoke --set no_such=1 --out " +
      quoted(fresh_path("x1")));
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.output.find("no_such") != std::string::npos);

  const CmdResult malformed = run_cli(
      "run --preset two-node-smoke --set windows --out " +
      quoted(fresh_path("x2")));
  CHECK(malformed.exit_code == 2);
  CHECK(malformed.output.find("key=value") != std::string::npos);

  const CmdResult both = run_cli(
      "run --preset two-node-smoke --config foo.ini --out " +
      quoted(fresh_path("x3")));
  CHECK(both.exit_code == 2);
  CHECK(both.output.find("not both") != std::string::npos);

  const CmdResult unknown_preset =
      run_cli("run --preset warp-drive --out " + quoted(fresh_path("x4")));
  CHECK(unknown_preset.exit_code == 2);
  CHECK(unknown_preset.output.find("warp-drive") != std::string::npos);
}

TEST_CASE("replay-metrics reproduces the stored summary byte for byte") {
  const fs::path out = fresh_path("replay-src");
  REQUIRE(run_cli("run --preset two-node-smoke --seed 4 --out " + quoted(out))
              .exit_code == 0);

  const CmdResult replay =
      run_cli("replay-metrics --trace " + quoted(out / "trace.log"));
  CHECK(replay.exit_code == 0);
  CHECK(replay.output == read_text_file((out / "summary.txt").string()));

  // Writing to a directory reproduces both files exactly.
  const fs::path rdir = fresh_path("replay-out");
  const CmdResult written =
      run_cli("replay-metrics --trace " + quoted(out / "trace.log") + " --out " +
              quoted(rdir));
  CHECK(written.exit_code == 0);
  CHECK(read_text_file((rdir / "summary.txt").string()) ==
        read_text_file((out / "summary.txt").string()));
  CHECK(read_text_file((rdir / "series.csv").string()) ==
        read_text_file((out / "series.csv").string()));

  // A coarser cadence is marked in the summary so it cannot be mistaken for
  // a comparable measurement.
  const CmdResult coarse = run_cli(
      "replay-metrics --cadence 3 --trace " + quoted(out / "trace.log"));
  CHECK(coarse.exit_code == 0);
  CHECK(coarse.output.find("cadence_multiple = 3") != std::string::npos);
}

TEST_CASE("replay-metrics rejects a corrupt trace and names the line") {
  const fs::path out = fresh_path("replay-bad-src");
  REQUIRE(run_cli("run --preset two-node-smoke --seed 4 --out " + quoted(out))
              .exit_code == 0);

  std::string text = read_text_file((out / "trace.log").string());
  text += "123 0 tx_data 1 0\n";  // 5 fields instead of 11
  const fs::path bad = fresh_path("bad-trace.log");
  write_text_file(bad.string(), text);

  const CmdResult res = run_cli("replay-metrics --trace " + quoted(bad));
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("line") != std::string::npos);
  CHECK(res.output.find("11 fields") != std::string::npos);
}

TEST_CASE("sweep fans out over axes and seeds and aggregates csvs") {
  const fs::path out = fresh_path("sweep-out");
  const CmdResult res = run_cli(
      "sweep --preset two-node-smoke --axis loss_probability=0,0.1 "
      "--seeds 1..3 --workers 2 --out " + quoted(out));
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("6/6 runs succeeded") != std::string::npos);
  CHECK(fs::exists(out / "sweep_summary.csv"));
  CHECK(fs::exists(out / "sweep_means.csv"));
  CHECK(fs::exists(out / "sweep_base.ini"));
  CHECK(fs::exists(out / "loss_probability=0/seed-1/trace.log"));
  CHECK(fs::exists(out / "loss_probability=0.1/seed-3/summary.txt"));

  // One row per run, all column counts matching the header.
  std::istringstream csv(read_text_file((out / "sweep_summary.csv").string()));
  std::string header;
  REQUIRE(std::getline(csv, header));
  const std::size_t cols = count_fields(header);
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) {
    ++rows;
    CHECK(count_fields(line) == cols);
  }
  CHECK(rows == 6);

  std::istringstream means(read_text_file((out / "sweep_means.csv").string()));
  REQUIRE(std::getline(means, header));
  rows = 0;
  for (std::string line; std::getline(means, line);) {
    ++rows;
    CHECK(count_fields(line) == count_fields(header));
  }
  CHECK(rows == 2);

  const CmdResult bad_axis = run_cli(
      "sweep --preset two-node-smoke --axis nonsense --out " +
      quoted(fresh_path("x5")));
  CHECK(bad_axis.exit_code == 2);

  const CmdResult bad_seeds = run_cli(
      "sweep --preset two-node-smoke --seeds 9..3 --out " +
      quoted(fresh_path("x6")));
  CHECK(bad_seeds.exit_code == 2);
  CHECK(bad_seeds.output.find("descending") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("run --preset two-node-smoke").exit_code == 2);  // no --out
  CHECK(run_cli("").exit_code == 2);                             // no subcommand
}

// Library-level: a failed sweep cell must still line up with the header.
TEST_CASE("sweep csv keeps error rows aligned with the header") {
  SweepSpec spec;
  spec.axes.push_back({"loss_probability", {"0", "0.2"}});

  SweepCell ok_cell;
  ok_cell.dir = "loss_probability=0/seed-1";
  ok_cell.values = {"0"};
  ok_cell.seed = 1;
  ok_cell.ok = true;
  ok_cell.summary.generation_size = 10;

  SweepCell bad_cell;
  bad_cell.dir = "loss_probability=0.2/seed-1";
  bad_cell.values = {"0.2"};
  bad_cell.seed = 1;
  bad_cell.ok = false;
  bad_cell.error = "simulated failure";

  const std::string csv = write_sweep_csv(spec, {ok_cell, bad_cell});
  std::istringstream in(csv);
  std::string header, row_ok, row_bad;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row_ok));
  REQUIRE(std::getline(in, row_bad));
  CHECK(count_fields(row_ok) == count_fields(header));
  CHECK(count_fields(row_bad) == count_fields(header));
  CHECK(row_bad.find("simulated failure") != std::string::npos);
}
