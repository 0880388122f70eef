#include "dragoncast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dragoncast {

double e_cost(std::uint64_t transmissions, std::uint16_t generation_size) {
  if (generation_size == 0)
    throw std::domain_error("generation size must be positive");
  return static_cast<double>(transmissions) / static_cast<double>(generation_size);
}

double e_bound(std::uint16_t n_nodes, double m_avg_max) {
  if (m_avg_max <= 0.0)
    throw std::domain_error("average-maximum neighbor count must be positive");
  return static_cast<double>(n_nodes) / m_avg_max;
}

double e_ref_eff(double bound, double cost) {
  if (cost <= 0.0) throw std::domain_error("cost must be positive");
  return bound / cost;
}

double rtd(std::uint16_t decoded, std::uint16_t rank) {
  if (rank == 0) return 1.0;  // vacuous: everything received is decoded
  return static_cast<double>(decoded) / static_cast<double>(rank);
}

double routing_bound() {
  return 6.0 * std::numbers::pi /
         (2.0 * std::numbers::pi + 3.0 * std::sqrt(3.0));
}

MetricsReport compute_metrics(const TraceLog& log, std::uint32_t cadence_multiple) {
  if (cadence_multiple == 0)
    throw std::invalid_argument("cadence multiple must be positive");
  const std::uint16_t d = log.meta.generation_size;

  MetricsReport report;
  RunSummary& s = report.summary;
  s.n_nodes = log.meta.n_nodes;
  s.generation_size = d;
  s.seed = log.meta.seed;
  s.cadence_multiple = cadence_multiple;

  // Sample rows grouped by time, in time order (the trace is time-sorted).
  std::map<Micros, std::vector<const TraceRecord*>> samples;

  for (const auto& r : log.records) {
    switch (r.kind) {
      case TraceKind::tx_data:
        ++s.data_tx;
        s.total_bytes += r.bytes;
        s.overhead_bytes += r.bytes - std::min<std::uint32_t>(r.bytes, log.meta.payload_size);
        break;
      case TraceKind::tx_ctrl:
        ++s.ctrl_tx;
        s.total_bytes += r.bytes;
        s.overhead_bytes += r.bytes;
        break;
      case TraceKind::phase:
        if (r.phase == 'S')
          s.termination_time = r.t;  // overwritten until the last stop
        break;
      case TraceKind::rx:
      case TraceKind::sample:
        break;
    }
    if (r.kind == TraceKind::sample) samples[r.t].push_back(&r);
    s.end_time = r.t;
  }

  s.total_tx = s.data_tx + s.ctrl_tx;
  s.e_cost = e_cost(s.total_tx, d);
  s.e_cost_data = e_cost(s.data_tx, d);

  std::uint32_t index = 0;
  for (const auto& [t, rows] : samples) {
    if (index++ % cadence_multiple != 0) continue;
    SeriesPoint p;
    p.t = t;
    double rank_sum = 0, high_sum = 0, rtd_sum = 0;
    std::uint32_t rtd_n = 0;
    p.min_rank = 0xffff;
    p.min_high_index = 0xffff;
    for (const TraceRecord* r : rows) {
      rank_sum += r->rank;
      high_sum += r->high_index;
      p.min_rank = std::min(p.min_rank, r->rank);
      p.min_high_index = std::min(p.min_high_index, r->high_index);
      p.max_neighbors = std::max(p.max_neighbors, static_cast<std::uint32_t>(r->aux1));
      if (r->rank > 0) {
        rtd_sum += rtd(r->low_index, r->rank);
        ++rtd_n;
      }
      if (r->node == 0) p.source_revealed = static_cast<std::uint16_t>(r->aux2);
    }
    const double n = static_cast<double>(rows.size());
    p.avg_rank = rank_sum / n;
    p.avg_high_index = high_sum / n;
    p.avg_rtd = rtd_n ? rtd_sum / static_cast<double>(rtd_n) : 0.0;
    report.series.push_back(p);
  }

  double m_sum = 0;
  for (const auto& p : report.series) m_sum += p.max_neighbors;
  if (!report.series.empty())
    s.m_avg_max = m_sum / static_cast<double>(report.series.size());
  if (s.m_avg_max > 0) {
    s.e_bound = e_bound(s.n_nodes, s.m_avg_max);
    if (s.total_tx > 0) s.e_ref_eff = e_ref_eff(*s.e_bound, s.e_cost);
  }

  // Time-averaged behavior over the middle 80% of the run, away from the
  // startup transient and the termination tail.
  const Micros t_end = s.end_time;
  const Micros lo = static_cast<Micros>(static_cast<double>(t_end) * 0.1);
  const Micros hi = static_cast<Micros>(static_cast<double>(t_end) * 0.9);
  double rtd_sum = 0, gap_sum = 0;
  std::uint32_t mid_n = 0;
  for (const auto& p : report.series) {
    if (p.t < lo || p.t > hi) continue;
    rtd_sum += p.avg_rtd;
    gap_sum += std::fabs(p.avg_high_index - p.avg_rank);
    ++mid_n;
  }
  if (mid_n > 0) {
    s.rtd_mid80 = rtd_sum / mid_n;
    s.high_rank_gap_mid80 = gap_sum / mid_n;
  }

  if (!report.series.empty()) {
    const auto& final_rows = samples.rbegin()->second;
    std::uint16_t min_rank = 0xffff;
    bool all_stopped = true;
    for (const TraceRecord* r : final_rows) {
      min_rank = std::min(min_rank, r->rank);
      all_stopped = all_stopped && r->phase == 'S';
    }
    s.min_final_rank = min_rank;
    s.converged = min_rank == d;
    s.all_stopped = all_stopped;
  }
  if (!s.all_stopped) s.termination_time.reset();

  return report;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string opt6(const std::optional<double>& v) {
  return v ? fixed6(*v) : "na";
}

}  // namespace

std::string write_series_csv(const std::vector<SeriesPoint>& series) {
  std::ostringstream out;
  out << "time_s,avg_rank,min_rank,avg_high,min_high,revealed,avg_rtd,max_neighbors\n";
  for (const auto& p : series) {
    out << fixed6(micros_to_seconds(p.t)) << ',' << fixed6(p.avg_rank) << ','
        << p.min_rank << ',' << fixed6(p.avg_high_index) << ','
        << p.min_high_index << ',' << p.source_revealed << ','
        << fixed6(p.avg_rtd) << ',' << p.max_neighbors << '\n';
  }
  return out.str();
}

std::string write_summary(const RunSummary& s) {
  std::ostringstream out;
  out << "# dragoncast run summary\n";
  out << "# channel: unit-disk radio + bernoulli loss";
  out << " (simplified; no 802.11 MAC/PHY)\n";
  out << "n_nodes = " << s.n_nodes << "\n";
  out << "generation_size = " << s.generation_size << "\n";
  out << "seed = " << s.seed << "\n";
  out << "data_tx = " << s.data_tx << "\n";
  out << "ctrl_tx = " << s.ctrl_tx << "\n";
  out << "total_tx = " << s.total_tx << "\n";
  out << "total_bytes = " << s.total_bytes << "\n";
  out << "overhead_bytes = " << s.overhead_bytes << "\n";
  out << "e_cost = " << fixed6(s.e_cost) << "\n";
  out << "e_cost_data = " << fixed6(s.e_cost_data) << "\n";
  out << "e_bound = " << opt6(s.e_bound) << "\n";
  out << "e_ref_eff = " << opt6(s.e_ref_eff) << "\n";
  out << "m_avg_max = " << fixed6(s.m_avg_max) << "\n";
  out << "rtd_mid80 = " << opt6(s.rtd_mid80) << "\n";
  out << "high_rank_gap_mid80 = " << opt6(s.high_rank_gap_mid80) << "\n";
  out << "converged = " << (s.converged ? "true" : "false") << "\n";
  out << "all_stopped = " << (s.all_stopped ? "true" : "false") << "\n";
  out << "end_time_s = " << fixed6(micros_to_seconds(s.end_time)) << "\n";
  out << "termination_time_s = "
      << (s.termination_time ? fixed6(micros_to_seconds(*s.termination_time)) : "na")
      << "\n";
  out << "min_final_rank = " << s.min_final_rank << "\n";
  out << "cadence_multiple = " << s.cadence_multiple << "\n";
  return out.str();
}

}  // namespace dragoncast
