#include "dragoncast/decoder.hpp"

#include <stdexcept>
#include <string>

namespace dragoncast {

DecoderState::DecoderState(FieldOrder order, std::uint16_t generation_size,
                           std::size_t payload_size)
    : gf_(order), gen_size_(generation_size), payload_size_(payload_size) {
  if (generation_size == 0)
    throw std::invalid_argument("generation size must be positive");
}

std::uint16_t DecoderState::high_index() const {
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it)
    if (!it->second.singleton()) return it->first;
  return 0;
}

std::uint16_t DecoderState::low_index_literal() const {
  std::uint16_t best = 0;
  for (const auto& [pivot, row] : rows_) {
    if (row.singleton()) continue;
    const std::uint16_t lo = row.vec.lowest_index();
    if (best == 0 || lo < best) best = lo;
  }
  return best;
}

std::uint16_t DecoderState::max_pivot() const {
  return rows_.empty() ? 0 : rows_.rbegin()->first;
}

IngestOutcome DecoderState::ingest(const CodedPacket& pkt) {
  return ingest(pkt.encoding, pkt.payload);
}

IngestOutcome DecoderState::ingest(const EncodingVector& encoding,
                                   std::span<const std::uint8_t> payload) {
  if (encoding.order() != gf_.order() ||
      encoding.generation_size() != gen_size_)
    throw std::invalid_argument("encoding vector does not match this session");
  if (encoding.is_zero())
    throw std::invalid_argument("cannot ingest a zero encoding vector");
  if (payload.size() != payload_size_)
    throw std::invalid_argument("payload length does not match this session");

  EncodingVector v = encoding;
  std::vector<std::uint8_t> p(payload.begin(), payload.end());

  // Eliminate at the highest index only, repeatedly, per the window rule.
  std::uint16_t h = v.highest_index();
  while (h != 0) {
    auto it = rows_.find(h);
    if (it == rows_.end()) break;
    const std::uint8_t c = v.coeff(h);  // stored pivots are normalized to 1
    v.add_scaled(it->second.vec, c, gf_);
    payload_add_scaled(p, it->second.payload, c, gf_);
    h = v.highest_index();
  }
  if (h == 0) return IngestOutcome::redundant;

  // Normalize the new pivot to 1.
  const std::uint8_t pc = v.coeff(h);
  if (pc != 1) {
    const std::uint8_t f = gf_.inv(pc);
    v.scale(f, gf_);
    payload_scale(p, f, gf_);
  }

  // Reduce the new row against existing pivots below it, then eliminate its
  // pivot from every row above it. Each elimination uses a row at its own
  // pivot index, so no stored row's highest index ever changes.
  for (auto& [pivot, row] : rows_) {
    if (pivot >= h) break;
    const std::uint8_t c = v.coeff(pivot);
    if (c) {
      v.add_scaled(row.vec, c, gf_);
      payload_add_scaled(p, row.payload, c, gf_);
    }
  }

  auto inserted = rows_.emplace(h, Row{std::move(v), std::move(p)});
  const Row& fresh = inserted.first->second;
  for (auto it = rows_.upper_bound(h); it != rows_.end(); ++it) {
    Row& above = it->second;
    const std::uint8_t c = above.vec.coeff(h);
    if (c) {
      above.vec.add_scaled(fresh.vec, c, gf_);
      payload_add_scaled(above.payload, fresh.payload, c, gf_);
    }
    if (above.vec.highest_index() != it->first)
      throw std::logic_error("pivot drifted from its highest index");
  }

  advance_prefix();
  return IngestOutcome::innovative;
}

void DecoderState::advance_prefix() {
  while (true) {
    auto it = rows_.find(static_cast<std::uint16_t>(decoded_prefix_ + 1));
    if (it == rows_.end()) break;
    // With rows fully reduced, a pivot adjoining the prefix must already be
    // a singleton: every other index it could contain is a decoded pivot.
    if (!it->second.singleton())
      throw std::logic_error("prefix row is not a singleton");
    ++decoded_prefix_;
  }
}

std::vector<SourcePacket> DecoderState::take_decoded() {
  std::vector<SourcePacket> out;
  for (std::uint16_t i = static_cast<std::uint16_t>(emitted_prefix_ + 1);
       i <= decoded_prefix_; ++i) {
    const Row& row = rows_.at(i);
    out.push_back({i, row.payload});
  }
  emitted_prefix_ = decoded_prefix_;
  return out;
}

std::optional<EncodedDraw> DecoderState::encode_window(std::uint16_t lo,
                                                       std::uint16_t hi,
                                                       Rng& rng) const {
  if (lo == 0 || hi > gen_size_ || lo > hi)
    return std::nullopt;

  std::vector<const Row*> eligible;
  for (const auto& [pivot, row] : rows_) {
    if (pivot > hi) break;
    if (row.vec.support_within(lo, hi)) eligible.push_back(&row);
  }
  if (eligible.empty()) return std::nullopt;

  const bool binary = gf_.order() == FieldOrder::gf2;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<std::uint8_t> coeffs(eligible.size());
    bool any = false;
    for (auto& c : coeffs) {
      c = binary ? static_cast<std::uint8_t>(rng.bit()) : rng.byte();
      any |= c != 0;
    }
    if (!any) continue;  // the only way a combination of independent rows is zero

    EncodedDraw draw{EncodingVector(gf_.order(), gen_size_),
                     std::vector<std::uint8_t>(payload_size_, 0)};
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      if (coeffs[i] == 0) continue;
      draw.encoding.add_scaled(eligible[i]->vec, coeffs[i], gf_);
      payload_add_scaled(draw.payload, eligible[i]->payload, coeffs[i], gf_);
    }
    if (draw.encoding.is_zero())
      throw std::logic_error("combination of independent rows came out zero");
    return draw;
  }
  return std::nullopt;
}

void DecoderState::check_invariants() const {
  std::uint16_t run = 0;
  bool contiguous = true;
  for (const auto& [pivot, row] : rows_) {
    if (row.vec.highest_index() != pivot)
      throw std::logic_error("row stored under a stale pivot");
    if (row.vec.coeff(pivot) != 1)
      throw std::logic_error("pivot coefficient is not normalized");
    if (row.payload.size() != payload_size_)
      throw std::logic_error("row payload length drifted");
    for (const auto& [other_pivot, other] : rows_) {
      (void)other;
      if (other_pivot != pivot && row.vec.coeff(other_pivot) != 0)
        throw std::logic_error("row not reduced against a stored pivot");
    }
    if (contiguous && pivot == run + 1)
      ++run;
    else
      contiguous = false;
  }
  if (run != decoded_prefix_)
    throw std::logic_error("decoded prefix disagrees with the pivot run");
  for (std::uint16_t i = 1; i <= decoded_prefix_; ++i)
    if (!rows_.at(i).singleton())
      throw std::logic_error("prefix row is not a singleton");
}

std::vector<std::uint16_t> DecoderState::pivots() const {
  std::vector<std::uint16_t> out;
  out.reserve(rows_.size());
  for (const auto& [pivot, row] : rows_) {
    (void)row;
    out.push_back(pivot);
  }
  return out;
}

}  // namespace dragoncast
