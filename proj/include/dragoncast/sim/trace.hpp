#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dragoncast/galois.hpp"
#include "dragoncast/types.hpp"

namespace dragoncast {

enum class TraceKind : std::uint8_t { tx_data, tx_ctrl, rx, phase, sample };

// One line of the run log. Every record carries the node's coding state at
// that instant; aux1/aux2 depend on the kind:
//   tx_data: aux1 = window_lo, aux2 = window_hi
//   tx_ctrl: aux1 = aux2 = 0
//   rx:      aux1 = 1 if the packet was innovative (0 for control/redundant),
//            aux2 = sender id
//   phase:   aux1 = aux2 = 0 (the phase column itself carries the change)
//   sample:  aux1 = nodes within radio range, aux2 = source injection count
//            (0 for relays)
struct TraceRecord {
  Micros t = 0;
  NodeId node = 0;
  TraceKind kind = TraceKind::sample;
  std::uint16_t rank = 0;
  std::uint16_t low_index = 0;          // decoded prefix
  std::uint16_t low_index_literal = 0;  // lowest index over non-decoded rows
  std::uint16_t high_index = 0;         // max(high_index op, decoded prefix)
  char phase = 'I';                     // I(dle) / A(ctive) / S(topped)
  std::uint32_t bytes = 0;              // serialized size for tx records
  std::int64_t aux1 = 0;
  std::int64_t aux2 = 0;
};

// Session constants replayed tools need; embedded in the trace header.
struct TraceMeta {
  std::uint16_t n_nodes = 0;
  std::uint16_t generation_size = 0;
  std::uint32_t payload_size = 0;
  FieldOrder field = FieldOrder::gf2;
  std::uint16_t window = 0;
  Micros sample_period = 0;
  std::uint64_t seed = 0;
};

struct TraceLog {
  TraceMeta meta;
  std::vector<TraceRecord> records;
};

struct TraceParseError : std::runtime_error {
  TraceParseError(std::size_t line_in, const std::string& what_in)
      : std::runtime_error("trace line " + std::to_string(line_in) + ": " + what_in),
        line(line_in) {}
  std::size_t line;
};

std::string trace_kind_name(TraceKind k);

void write_trace(const TraceLog& log, std::ostream& out);
std::string write_trace(const TraceLog& log);

// Inverse of write_trace; throws TraceParseError naming the first bad line.
TraceLog parse_trace(std::istream& in);
TraceLog parse_trace(const std::string& text);

// FNV-1a over the serialized trace; convenient for determinism checks.
std::uint64_t trace_digest(const TraceLog& log);

}  // namespace dragoncast
