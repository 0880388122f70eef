#include "dragoncast/sim/trace.hpp"

#include <array>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace dragoncast {

namespace {

constexpr const char* kKindNames[] = {"tx_data", "tx_ctrl", "rx", "phase", "sample"};

constexpr char kColumns[] =
    "time_us node kind rank low low_lit high phase bytes aux1 aux2";

}  // namespace

std::string trace_kind_name(TraceKind k) {
  return kKindNames[static_cast<std::size_t>(k)];
}

void write_trace(const TraceLog& log, std::ostream& out) {
  char buf[256];
  out << "# dragoncast trace v1\n";
  out << "# n_nodes " << log.meta.n_nodes << "\n";
  out << "# generation_size " << log.meta.generation_size << "\n";
  out << "# payload_size " << log.meta.payload_size << "\n";
  out << "# field " << (log.meta.field == FieldOrder::gf2 ? "gf2" : "gf256") << "\n";
  out << "# window " << log.meta.window << "\n";
  out << "# sample_period_us " << log.meta.sample_period << "\n";
  out << "# seed " << log.meta.seed << "\n";
  out << "# columns: " << kColumns << "\n";
  for (const auto& r : log.records) {
    std::snprintf(buf, sizeof buf,
                  "%" PRId64 " %u %s %u %u %u %u %c %u %" PRId64 " %" PRId64 "\n",
                  r.t, static_cast<unsigned>(r.node),
                  kKindNames[static_cast<std::size_t>(r.kind)],
                  static_cast<unsigned>(r.rank), static_cast<unsigned>(r.low_index),
                  static_cast<unsigned>(r.low_index_literal),
                  static_cast<unsigned>(r.high_index), r.phase, r.bytes, r.aux1,
                  r.aux2);
    out << buf;
  }
}

std::string write_trace(const TraceLog& log) {
  std::ostringstream out;
  write_trace(log, out);
  return out.str();
}

namespace {

bool parse_meta_line(const std::string& line, TraceMeta& meta) {
  std::istringstream in(line);
  std::string hash, key, value;
  in >> hash >> key >> value;
  if (key == "n_nodes") meta.n_nodes = static_cast<std::uint16_t>(std::stoul(value));
  else if (key == "generation_size") meta.generation_size = static_cast<std::uint16_t>(std::stoul(value));
  else if (key == "payload_size") meta.payload_size = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "field") meta.field = value == "gf256" ? FieldOrder::gf256 : FieldOrder::gf2;
  else if (key == "window") meta.window = static_cast<std::uint16_t>(std::stoul(value));
  else if (key == "sample_period_us") meta.sample_period = std::stoll(value);
  else if (key == "seed") meta.seed = std::stoull(value);
  else return key == "dragoncast" || key == "columns:";
  return true;
}

}  // namespace

TraceLog parse_trace(std::istream& in) {
  TraceLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw TraceParseError(line_no, "blank line");
    if (line[0] == '#') {
      if (!parse_meta_line(line, log.meta))
        throw TraceParseError(line_no, "unknown metadata line");
      continue;
    }
    TraceRecord r;
    char kind[16];
    char phase;
    unsigned node, rank, low, low_lit, high, bytes;
    const int got = std::sscanf(line.c_str(),
                                "%" SCNd64 " %u %15s %u %u %u %u %c %u %" SCNd64 " %" SCNd64,
                                &r.t, &node, kind, &rank, &low, &low_lit, &high,
                                &phase, &bytes, &r.aux1, &r.aux2);
    if (got != 11) throw TraceParseError(line_no, "expected 11 fields, parsed " + std::to_string(got));
    bool known = false;
    for (std::size_t k = 0; k < 5; ++k)
      if (std::strcmp(kind, kKindNames[k]) == 0) {
        r.kind = static_cast<TraceKind>(k);
        known = true;
        break;
      }
    if (!known) throw TraceParseError(line_no, std::string("unknown record kind '") + kind + "'");
    if (phase != 'I' && phase != 'A' && phase != 'S')
      throw TraceParseError(line_no, std::string("unknown phase '") + phase + "'");
    if (!log.records.empty() && r.t < log.records.back().t)
      throw TraceParseError(line_no, "time runs backwards");
    r.node = static_cast<NodeId>(node);
    r.rank = static_cast<std::uint16_t>(rank);
    r.low_index = static_cast<std::uint16_t>(low);
    r.low_index_literal = static_cast<std::uint16_t>(low_lit);
    r.high_index = static_cast<std::uint16_t>(high);
    r.phase = phase;
    r.bytes = bytes;
    log.records.push_back(r);
  }
  if (log.meta.n_nodes == 0 || log.meta.generation_size == 0)
    throw TraceParseError(line_no, "missing n_nodes/generation_size metadata");
  return log;
}

TraceLog parse_trace(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

std::uint64_t trace_digest(const TraceLog& log) {
  const std::string text = write_trace(log);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace dragoncast
