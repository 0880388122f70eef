#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dragoncast/metrics.hpp"
#include "dragoncast/sim/config.hpp"
#include "dragoncast/sim/simulator.hpp"
#include "dragoncast/sim/trace.hpp"

using namespace dragoncast;

TEST_CASE("cost, bound, and reference efficiency match hand values") {
  CHECK(e_cost(3000, 1000) == 3.0);
  CHECK(e_cost(0, 50) == 0.0);
  CHECK(e_cost(20, 20) == 1.0);
  CHECK_THROWS_AS((void)e_cost(100, 0), std::domain_error);

  CHECK(e_bound(30, 6.0) == 5.0);
  // Complete graph: every node always hears the other N-1, so the bound is
  // N/(N-1) (slightly above 1; the bound is a large-N approximation).
  CHECK(e_bound(5, 4.0) == doctest::Approx(1.25));
  CHECK(e_bound(2, 1.0) == 2.0);
  // Two disjoint 15-cliques: max neighbor count is 14 everywhere.
  CHECK(e_bound(30, 14.0) == doctest::Approx(30.0 / 14.0));
  CHECK_THROWS_AS((void)e_bound(10, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)e_bound(10, -2.0), std::domain_error);

  CHECK(e_ref_eff(5.0, 10.0) == 0.5);
  CHECK(e_ref_eff(5.0, 5.0) == 1.0);
  CHECK_THROWS_AS((void)e_ref_eff(5.0, 0.0), std::domain_error);
}

TEST_CASE("the probabilistic-routing efficiency bound is a fixed constant") {
  const double expected = 6.0 * 3.14159265358979323846 /
                          (2.0 * 3.14159265358979323846 + 3.0 * std::sqrt(3.0));
  CHECK(std::abs(routing_bound() - expected) < 1e-12);
  CHECK(std::abs(routing_bound() - 1.6420) <= 1e-4);
}

TEST_CASE("real-time decoding ratio conventions") {
  CHECK(rtd(80, 100) == 0.8);
  CHECK(rtd(0, 5) == 0.0);
  CHECK(rtd(7, 7) == 1.0);
  // A node that holds nothing has trivially decoded everything it holds.
  CHECK(rtd(0, 0) == 1.0);
}

TEST_CASE("a lone source injects exactly one packet per symbol") {
  // With no relays the source emits one coded packet per revealed symbol and
  // then stops: total cost is exactly 1.0 transmission per symbol.  GF(256)
  // keeps the all-zero-draw probability negligible so the count is exact.
  SimConfig cfg;
  cfg.n_nodes = 1;
  cfg.field_width = cfg.field_height = 100;
  cfg.speed_min = cfg.speed_max = 0;
  cfg.field = FieldOrder::gf256;
  cfg.generation_size = 20;
  cfg.window = 8;
  cfg.payload_size = 24;
  cfg.source_rate = 8.867;
  cfg.horizon = 30;
  cfg.sample_period = 0.25;
  cfg.seed = 5;

  const RunResult res = Simulator(cfg).run();
  CHECK(res.all_stopped);

  const MetricsReport report = compute_metrics(res.trace);
  CHECK(report.summary.data_tx == 20);
  CHECK(report.summary.ctrl_tx == 0);
  CHECK(report.summary.e_cost == 1.0);
  CHECK(report.summary.e_cost_data == 1.0);
  CHECK(report.summary.converged);
  CHECK(report.summary.all_stopped);
  CHECK(report.summary.min_final_rank == 20);

  // No neighbors ever: the dissemination bound is undefined and the summary
  // reports it (and the derived reference efficiency) as absent.
  CHECK(!report.summary.e_bound.has_value());
  CHECK(!report.summary.e_ref_eff.has_value());
  const std::string text = write_summary(report.summary);
  CHECK(text.find("e_bound = na") != std::string::npos);
  CHECK(text.find("e_ref_eff = na") != std::string::npos);
}

namespace {

// A small static cluster where everyone hears everyone.  Used both for the
// tally cross-check and for the replay-identity checks.
RunResult clustered_run() {
  SimConfig cfg;
  cfg.n_nodes = 5;
  cfg.field_width = cfg.field_height = 200;
  cfg.radio_range = 400;
  cfg.speed_min = cfg.speed_max = 0;
  cfg.loss_probability = 0.05;
  cfg.payload_size = 32;
  cfg.generation_size = 30;
  cfg.window = 10;
  cfg.source_rate = 8.867;
  cfg.horizon = 120;
  cfg.sample_period = 0.5;
  cfg.seed = 7;
  return Simulator(cfg).run();
}

}  // namespace

TEST_CASE("summary tallies are recomputable from the raw trace") {
  const RunResult res = clustered_run();
  REQUIRE(res.all_stopped);
  const TraceLog& log = res.trace;
  const MetricsReport report = compute_metrics(log);
  const RunSummary& s = report.summary;

  // Independent tallies straight off the record stream.
  std::uint64_t data_tx = 0, ctrl_tx = 0, total_bytes = 0;
  std::optional<Micros> last_stop;
  std::set<Micros> sample_times;
  std::map<Micros, std::uint32_t> max_neighbors;
  for (const TraceRecord& r : log.records) {
    switch (r.kind) {
      case TraceKind::tx_data:
        ++data_tx;
        total_bytes += r.bytes;
        break;
      case TraceKind::tx_ctrl:
        ++ctrl_tx;
        total_bytes += r.bytes;
        break;
      case TraceKind::phase:
        if (r.phase == 'S') last_stop = r.t;
        break;
      case TraceKind::sample: {
        sample_times.insert(r.t);
        auto& m = max_neighbors[r.t];
        m = std::max(m, static_cast<std::uint32_t>(r.aux1));
        break;
      }
      case TraceKind::rx:
        break;
    }
  }

  CHECK(s.n_nodes == 5);
  CHECK(s.generation_size == 30);
  CHECK(s.seed == 7);
  CHECK(s.data_tx == data_tx);
  CHECK(s.ctrl_tx == ctrl_tx);
  CHECK(s.total_tx == data_tx + ctrl_tx);
  CHECK(s.total_bytes == total_bytes);
  // Every data packet carries exactly the configured payload; everything
  // else on the air is coding/protocol overhead.
  CHECK(s.overhead_bytes == total_bytes - data_tx * 32);
  CHECK(s.e_cost == doctest::Approx((data_tx + ctrl_tx) / 30.0));
  CHECK(s.e_cost_data == doctest::Approx(data_tx / 30.0));

  double m_sum = 0;
  for (const auto& [t, m] : max_neighbors) m_sum += m;
  const double m_avg = m_sum / static_cast<double>(max_neighbors.size());
  CHECK(s.m_avg_max == doctest::Approx(m_avg));
  REQUIRE(s.e_bound.has_value());
  CHECK(*s.e_bound == doctest::Approx(5.0 / m_avg));
  REQUIRE(s.e_ref_eff.has_value());
  CHECK(*s.e_ref_eff == doctest::Approx(*s.e_bound / s.e_cost));
  // All five nodes are mutual neighbors the whole run.
  CHECK(s.m_avg_max == doctest::Approx(4.0));

  CHECK(s.converged);
  CHECK(s.all_stopped);
  CHECK(s.min_final_rank == 30);
  REQUIRE(s.termination_time.has_value());
  CHECK(*s.termination_time == *last_stop);
  CHECK(s.end_time == log.records.back().t);
  CHECK(s.end_time < 120 * kMicrosPerSecond);

  // One series point per distinct sample time at the default cadence.
  CHECK(report.series.size() == sample_times.size());
  CHECK(report.series.front().t == 0);
  // At t=0 only the source holds anything (its own preloaded units, all
  // trivially decoded), so the average over nodes with rank > 0 is exactly 1.
  CHECK(report.series.front().avg_rtd == 1.0);
  CHECK(report.series.back().t == s.end_time);
  CHECK(report.series.back().min_rank == 30);
  CHECK(report.summary.rtd_mid80.has_value());
  CHECK(report.summary.high_rank_gap_mid80.has_value());
}

TEST_CASE("metrics replayed from serialized traces are byte-identical") {
  const RunResult res = clustered_run();
  const TraceLog& log = res.trace;

  const std::string text = write_trace(log);
  const TraceLog replayed = parse_trace(text);
  CHECK(trace_digest(replayed) == trace_digest(log));

  const MetricsReport direct = compute_metrics(log);
  const MetricsReport replay = compute_metrics(replayed);
  CHECK(write_summary(replay.summary) == write_summary(direct.summary));
  CHECK(write_series_csv(replay.series) == write_series_csv(direct.series));
}

TEST_CASE("summary text carries the channel-model note") {
  RunSummary s;
  s.generation_size = 10;
  const std::string text = write_summary(s);
  CHECK(text.rfind("# dragoncast run summary\n", 0) == 0);
  CHECK(text.find("# channel: unit-disk radio + bernoulli loss "
                  "(simplified; no 802.11 MAC/PHY)\n") != std::string::npos);
  CHECK(text.find("cadence_multiple = 1") != std::string::npos);
}

TEST_CASE("series csv has the documented header and one row per point") {
  const RunResult res = clustered_run();
  const MetricsReport report = compute_metrics(res.trace);
  const std::string csv = write_series_csv(report.series);

  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "time_s,avg_rank,min_rank,avg_high,min_high,revealed,avg_rtd,max_neighbors");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(rows == report.series.size());
}

TEST_CASE("a coarser sampling cadence subsamples the series") {
  const RunResult res = clustered_run();
  const MetricsReport full = compute_metrics(res.trace, 1);
  const MetricsReport half = compute_metrics(res.trace, 2);

  CHECK(half.summary.cadence_multiple == 2);
  CHECK(half.series.size() == (full.series.size() + 1) / 2);
  for (std::size_t i = 0; i < half.series.size(); ++i) {
    CHECK(half.series[i].t == full.series[2 * i].t);
    CHECK(half.series[i].avg_rank == full.series[2 * i].avg_rank);
  }
  // Transmission counts do not depend on the sampling cadence.
  CHECK(half.summary.total_tx == full.summary.total_tx);
  CHECK(write_summary(half.summary).find("cadence_multiple = 2") !=
        std::string::npos);

  CHECK_THROWS_AS((void)compute_metrics(res.trace, 0), std::invalid_argument);
}
