#pragma once

// Randomized decoder-vs-oracle trace driver shared by the unit tests and the
// acceptance suite. One call simulates a lossy, reordered, duplicated packet
// stream from a full source through sliding windows into one decoder, with
// an independent dense-elimination oracle shadowing every delivery.

#include <cstdint>
#include <string>
#include <vector>

namespace dragoncast::testing {

struct FuzzReport {
  std::size_t delivered = 0;    // packets fed to the decoder
  bool completed = false;       // receiver reached full rank
  // Human-readable descriptions of every divergence from the oracle or
  // invariant violation; empty means the trace was clean.
  std::vector<std::string> problems;
};

// Runs one random trace. Session parameters (field order, D, payload size,
// window size, loss/duplication/reorder probabilities) all derive from the
// seed. Checks, per delivered packet: rank equality with the oracle,
// innovative <=> rank increase, pivot monotonicity, decoder structural
// invariants, and truth-identity of every decoded payload. At the end of the
// trace: from-scratch oracle rank and solved prefix, and full payload
// recovery once rank reaches D.
FuzzReport fuzz_decoder_trace(std::uint64_t seed);

}  // namespace dragoncast::testing
