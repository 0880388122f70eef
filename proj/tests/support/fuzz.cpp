#include "support/fuzz.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "dragoncast/decoder.hpp"
#include "dragoncast/rng.hpp"
#include "support/oracle.hpp"

namespace dragoncast::testing {

namespace {

struct Delivery {
  EncodingVector vec;
  std::vector<std::uint8_t> payload;
};

}  // namespace

FuzzReport fuzz_decoder_trace(std::uint64_t seed) {
  FuzzReport report;
  Rng rng(mix64(seed) ^ 0xf022ull);

  const FieldOrder order = (seed & 1) ? FieldOrder::gf256 : FieldOrder::gf2;
  const std::uint16_t d =
      static_cast<std::uint16_t>(4 + rng.uniform_u32(order == FieldOrder::gf2 ? 29 : 21));
  const std::size_t payload_size = 1 + rng.uniform_u32(16);
  const std::uint16_t k = static_cast<std::uint16_t>(2 + rng.uniform_u32(d - 1));
  const double loss = rng.uniform(0.0, 0.4);
  const double dup = 0.15;
  const double stash_p = 0.2;

  auto fail = [&](std::string what) { report.problems.push_back(std::move(what)); };

  // Ground-truth source payloads and a full-rank source buffer of units.
  std::vector<std::vector<std::uint8_t>> truth(d);
  DecoderState source(order, d, payload_size);
  for (std::uint16_t i = 1; i <= d; ++i) {
    truth[i - 1u].resize(payload_size);
    for (auto& b : truth[i - 1u]) b = rng.byte();
    source.ingest(EncodingVector::unit(order, d, i), truth[i - 1u]);
  }

  DecoderState dec(order, d, payload_size);
  DenseOracle oracle(order, d);
  std::vector<Delivery> history;  // delivered packets, for duplication
  std::vector<Delivery> stash;    // held back, for reordering
  std::uint16_t emitted = 0;      // contiguous truth prefix already handed out
  std::vector<std::uint16_t> last_pivots;

  auto deliver = [&](const Delivery& pkt) {
    const std::uint16_t before = dec.rank();
    const IngestOutcome outcome = dec.ingest(pkt.vec, pkt.payload);
    oracle.add(pkt.vec, pkt.payload);
    ++report.delivered;

    if (dec.rank() != oracle.rank())
      fail("rank " + std::to_string(dec.rank()) + " != oracle " +
           std::to_string(oracle.rank()) + " after packet " +
           std::to_string(report.delivered));
    const bool innovative = outcome == IngestOutcome::innovative;
    if (innovative != (dec.rank() == before + 1))
      fail("ingest outcome disagrees with the rank delta");

    const auto pivots = dec.pivots();
    if (!std::includes(pivots.begin(), pivots.end(), last_pivots.begin(),
                       last_pivots.end()))
      fail("a stored pivot regressed after packet " + std::to_string(report.delivered));
    last_pivots = pivots;

    try {
      dec.check_invariants();
    } catch (const std::exception& e) {
      fail(std::string("decoder invariant: ") + e.what());
    }

    for (const auto& sp : dec.take_decoded()) {
      if (sp.index != emitted + 1u)
        fail("decoded index " + std::to_string(sp.index) + " out of order");
      emitted = sp.index;
      if (sp.payload != truth[sp.index - 1u])
        fail("payload mismatch at index " + std::to_string(sp.index));
    }
    history.push_back(pkt);
  };

  auto draw_packet = [&](std::uint16_t lo_wanted) -> std::optional<Delivery> {
    const std::uint16_t lo = std::min<std::uint16_t>(std::max<std::uint16_t>(lo_wanted, 1), d);
    const std::uint16_t hi =
        std::min<std::uint16_t>(d, static_cast<std::uint16_t>(lo + rng.uniform_u32(k) ));
    auto enc = source.encode_window(lo, hi, rng);
    if (!enc) return std::nullopt;
    return Delivery{std::move(enc->encoding), std::move(enc->payload)};
  };

  // Phase 1: random windows with loss, duplication and reordering.
  const std::size_t cap = static_cast<std::size_t>(12) * d;
  for (std::size_t step = 0; step < cap && dec.rank() < d; ++step) {
    std::uint16_t lo_wanted;
    const double roll = rng.uniform01();
    if (roll < 0.5) {
      lo_wanted = static_cast<std::uint16_t>(dec.decoded_prefix() + 1);
    } else if (roll < 0.8) {
      const std::uint16_t back = static_cast<std::uint16_t>(rng.uniform_u32(k / 2 + 1));
      lo_wanted = static_cast<std::uint16_t>(
          dec.decoded_prefix() + 1 > back ? dec.decoded_prefix() + 1 - back : 1);
    } else {
      lo_wanted = static_cast<std::uint16_t>(1 + rng.uniform_u32(d));
    }

    if (!history.empty() && rng.bernoulli(dup)) {
      deliver(history[rng.uniform_u32(static_cast<std::uint32_t>(history.size()))]);
      continue;
    }
    auto pkt = draw_packet(lo_wanted);
    if (!pkt) continue;
    if (rng.bernoulli(loss)) continue;  // dropped on the channel: nobody sees it
    if (rng.bernoulli(stash_p)) {
      stash.push_back(std::move(*pkt));
    } else {
      deliver(*pkt);
      if (!stash.empty() && rng.bernoulli(0.5)) {
        const auto at = rng.uniform_u32(static_cast<std::uint32_t>(stash.size()));
        deliver(stash[at]);
        stash.erase(stash.begin() + at);
      }
    }
  }

  // Phase 2: flush the stash, then drive lossless ideal windows to completion.
  for (const auto& pkt : stash) {
    if (dec.rank() == d) break;
    deliver(pkt);
  }
  for (std::size_t step = 0; step < static_cast<std::size_t>(40) * d && dec.rank() < d;
       ++step) {
    auto pkt = draw_packet(static_cast<std::uint16_t>(dec.decoded_prefix() + 1));
    if (pkt) deliver(*pkt);
  }
  report.completed = dec.rank() == d;
  if (!report.completed) fail("trace did not reach full rank");

  // End-of-trace cross-checks against from-scratch elimination.
  if (dec.rank() != oracle.full_rank_recompute())
    fail("final rank disagrees with from-scratch elimination");
  if (dec.decoded_prefix() != oracle.solved_prefix())
    fail("decoded prefix " + std::to_string(dec.decoded_prefix()) +
         " != oracle solved prefix " + std::to_string(oracle.solved_prefix()));
  const auto solved = oracle.solve();
  for (std::uint16_t i = 0; i < d; ++i) {
    if (!solved[i].empty() && solved[i] != truth[i])
      fail("oracle solution mismatch at index " + std::to_string(i + 1));
  }
  if (report.completed && emitted != d) fail("full-rank trace did not emit every packet");

  return report;
}

}  // namespace dragoncast::testing
