#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dragoncast/packet.hpp"
#include "dragoncast/rng.hpp"

namespace dragoncast {

enum class IngestOutcome {
  innovative,  // rank increased by exactly one
  redundant,   // packet was a combination of stored rows
};

// One random combination drawn from a buffer, ready to become a CodedPacket.
struct EncodedDraw {
  EncodingVector encoding;
  std::vector<std::uint8_t> payload;
};

// Incremental Gaussian elimination with the sliding-window pivot rule: an
// incoming vector is only ever reduced at its single highest source index,
// and each stored row's pivot is its highest index. That makes the frontier
// of non-decoded rows monotone (a stored row's highest index never grows)
// and leaves the low end of the matrix lower-triangular, so a contiguous
// prefix of source packets becomes decodable before the block completes.
//
// Rows are additionally kept reduced against every other pivot (a row is
// only used to eliminate its own pivot index, which preserves the rule), so
// decoded packets are exactly the singleton rows and the decodable prefix is
// the contiguous pivot run starting at 1.
class DecoderState {
 public:
  DecoderState(FieldOrder order, std::uint16_t generation_size,
               std::size_t payload_size);

  std::uint16_t generation_size() const { return gen_size_; }
  const GaloisField& field() const { return gf_; }
  std::size_t payload_size() const { return payload_size_; }

  // Rank = number of stored rows (decoded singletons included).
  std::uint16_t rank() const { return static_cast<std::uint16_t>(rows_.size()); }

  // Source packets 1..decoded_prefix() are fully recovered.
  std::uint16_t decoded_prefix() const { return decoded_prefix_; }

  // Highest pivot over rows that are not yet decoded singletons; 0 if none.
  std::uint16_t high_index() const;

  // Lowest nonzero index over rows that are not yet decoded singletons; 0 if
  // none. Diagnostic counterpart of decoded_prefix().
  std::uint16_t low_index_literal() const;

  // Highest pivot over all rows; the upper end of what this buffer can
  // re-encode. 0 when empty.
  std::uint16_t max_pivot() const;

  // Reduce and either store or discard one coded payload. Throws
  // std::invalid_argument for vectors that do not match the session shape.
  IngestOutcome ingest(const EncodingVector& encoding,
                       std::span<const std::uint8_t> payload);
  IngestOutcome ingest(const CodedPacket& pkt);

  // Source packets recovered since the previous call, emitted in index order
  // exactly once each (always the contiguous prefix extension).
  std::vector<SourcePacket> take_decoded();

  // Random combination of exactly the rows whose support lies in [lo, hi].
  // nullopt when no row is eligible or eight coefficient draws in a row came
  // out all-zero (caller simply skips this transmission).
  std::optional<EncodedDraw> encode_window(std::uint16_t lo, std::uint16_t hi,
                                           Rng& rng) const;

  // Structural self-check (pivot = highest index, normalized pivots, reduced
  // rows, prefix consistency). Throws std::logic_error on violation.
  void check_invariants() const;

  // Pivot indices in increasing order (test and diagnostic hook).
  std::vector<std::uint16_t> pivots() const;

 private:
  struct Row {
    EncodingVector vec;
    std::vector<std::uint8_t> payload;
    bool singleton() const { return vec.nonzero_count() == 1; }
  };

  void advance_prefix();

  GaloisField gf_;
  std::uint16_t gen_size_;
  std::size_t payload_size_;
  std::map<std::uint16_t, Row> rows_;  // pivot index -> row, ordered
  std::uint16_t decoded_prefix_ = 0;
  std::uint16_t emitted_prefix_ = 0;
};

}  // namespace dragoncast
