#include "dragoncast/node.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dragoncast {

Node::Node(const NodeParams& params, Rng coeff_rng, Rng jitter_rng,
           const std::vector<std::vector<std::uint8_t>>* source_payloads)
    : params_(params),
      decoder_(params.field, params.generation_size, params.payload_size),
      coeff_rng_(coeff_rng),
      jitter_rng_(jitter_rng) {
  if (params_.window == 0 || params_.window > params_.generation_size)
    throw std::invalid_argument("window must lie in [1, generation_size]");
  if (params_.lifetime <= 0)
    throw std::invalid_argument("advertisement lifetime must be positive");

  if (params_.role == NodeRole::source) {
    if (source_payloads == nullptr ||
        source_payloads->size() != params_.generation_size)
      throw std::invalid_argument("source requires exactly D payloads");
    if (params_.source_rate <= 0.0)
      throw std::invalid_argument("source rate must be positive");
    for (std::uint16_t i = 1; i <= params_.generation_size; ++i) {
      const auto outcome = decoder_.ingest(
          EncodingVector::unit(params_.field, params_.generation_size, i),
          (*source_payloads)[i - 1u]);
      if (outcome != IngestOutcome::innovative)
        throw std::logic_error("source preload produced a redundant row");
    }
    (void)decoder_.take_decoded();  // the source does not re-emit its own data
    // The session owner is live from t = 0.
    phase_ = NodePhase::active;
    last_tx_ = 0;
    next_advert_ = params_.lifetime / 2;
    schedule_from(0, /*only_shorten=*/false);
  }
}

std::uint16_t Node::revealed(Micros now) const {
  if (params_.role != NodeRole::source) return params_.generation_size;
  const double injected =
      std::ceil(params_.source_rate * micros_to_seconds(now));
  if (injected <= 0.0) return 0;
  if (injected >= static_cast<double>(params_.generation_size))
    return params_.generation_size;
  return static_cast<std::uint16_t>(injected);
}

bool Node::source_injecting(Micros now) const {
  if (params_.role != NodeRole::source) return false;
  return data_sent_ < params_.generation_size ||
         revealed(now) < params_.generation_size;
}

std::optional<Node::Window> Node::select_window(Micros now) const {
  const std::uint16_t lo =
      static_cast<std::uint16_t>(neighbors_.min_low_index().value_or(0) + 1u);
  std::uint16_t extent = decoder_.max_pivot();
  if (params_.role == NodeRole::source)
    extent = std::min(extent, revealed(now));
  const std::uint32_t span_hi = static_cast<std::uint32_t>(lo) + params_.window - 1u;
  const std::uint16_t hi = static_cast<std::uint16_t>(
      std::min<std::uint32_t>(span_hi, extent));
  if (hi < lo) return std::nullopt;
  return Window{lo, hi};
}

double Node::current_rate(Micros now) const {
  RankView view{decoder_.rank(), neighbors_.ranks()};
  double r = policy_rate(params_.policy, params_.role == NodeRole::source, view);
  // The source keeps feeding at its injection rate until nothing is left
  // undelivered: while packets remain to inject, and after that while any
  // live neighbor still reports a rank below D. Without the second clause a
  // gap-driven policy throttles the source to the fleet's residual deficit
  // and the tail converges at a crawl.
  if (params_.role == NodeRole::source &&
      (source_injecting(now) ||
       !neighbors_.all_ranks_at_least(params_.generation_size)))
    r = std::max(r, params_.source_rate);
  return r;
}

PiggybackHeader Node::make_header(bool control) const {
  return PiggybackHeader{params_.id, decoder_.rank(), decoder_.decoded_prefix(),
                         params_.lifetime, control};
}

Micros Node::jittered_delay(Micros delay) {
  if (params_.jitter <= 0.0) return delay;
  const double f = jitter_rng_.uniform(1.0 - params_.jitter, 1.0 + params_.jitter);
  return std::max<Micros>(1, static_cast<Micros>(std::llround(static_cast<double>(delay) * f)));
}

void Node::schedule_from(Micros now, bool only_shorten) {
  const auto delay = next_delay_micros(current_rate(now));
  if (!delay) {
    if (!only_shorten) next_data_.reset();
    return;
  }
  const Micros candidate = now + jittered_delay(*delay);
  // A pending transmission is only ever moved earlier; repeated rank updates
  // from busy neighbors must not push it back forever.
  if (only_shorten && next_data_ && candidate >= *next_data_) return;
  next_data_ = candidate;
}

void Node::check_termination(Micros now) {
  if (phase_ != NodePhase::active) return;
  if (decoder_.rank() < params_.generation_size) return;
  if (source_injecting(now)) return;
  if (!neighbors_.all_ranks_at_least(params_.generation_size)) return;
  phase_ = NodePhase::stopped;
  next_data_.reset();  // rank beacons keep flowing via the advert timer
}

ReceiveResult Node::on_receive(const CodedPacket& pkt, Micros now) {
  ReceiveResult result;
  if (pkt.header.sender_id == params_.id) return result;  // own echo

  if (phase_ == NodePhase::idle) {
    phase_ = NodePhase::active;
    result.activated = true;
    last_tx_ = now;  // the silence clock starts at activation
    next_advert_ = now + params_.lifetime / 2;
  }

  neighbors_.upsert(pkt.header.sender_id, pkt.header.sender_rank,
                    pkt.header.sender_low_index, now + pkt.header.lifetime);

  if (!pkt.header.is_control)
    result.ingest = decoder_.ingest(pkt);

  if (phase_ == NodePhase::stopped &&
      pkt.header.sender_rank < params_.generation_size) {
    phase_ = NodePhase::active;  // a neighbor still needs data: restart
    result.restarted = true;
  }

  neighbors_.expire(now);
  if (phase_ == NodePhase::active)
    schedule_from(now, /*only_shorten=*/true);
  check_termination(now);
  return result;
}

std::optional<Broadcast> Node::on_data_timer(Micros now) {
  if (phase_ != NodePhase::active) {
    next_data_.reset();
    return std::nullopt;
  }
  neighbors_.expire(now);

  const double rate = current_rate(now);
  const auto delay = next_delay_micros(rate);
  if (!delay) {
    // The gap closed; stay silent until a reception changes the picture.
    next_data_.reset();
    check_termination(now);
    return std::nullopt;
  }
  next_data_ = now + jittered_delay(*delay);

  const auto window = select_window(now);
  std::optional<Broadcast> out;
  if (window) {
    auto draw = decoder_.encode_window(window->lo, window->hi, coeff_rng_);
    if (draw) {
      out = Broadcast{CodedPacket{std::move(draw->encoding), std::move(draw->payload),
                                  make_header(false)},
                      window->lo, window->hi};
      last_tx_ = now;
      next_advert_ = now + params_.lifetime / 2;
      ++data_sent_;
    }
  }
  check_termination(now);
  return out;
}

std::optional<Broadcast> Node::on_advert_timer(Micros now) {
  if (phase_ == NodePhase::idle) {
    next_advert_.reset();
    return std::nullopt;
  }
  neighbors_.expire(now);

  std::optional<Broadcast> out;
  const Micros half_life = params_.lifetime / 2;
  const bool silent_too_long = now - last_tx_ >= half_life;
  const bool must_advertise =
      decoder_.rank() < params_.generation_size || phase_ == NodePhase::stopped;
  if (silent_too_long && must_advertise) {
    out = Broadcast{CodedPacket{EncodingVector(params_.field, params_.generation_size),
                                {}, make_header(true)},
                    0, 0};
    last_tx_ = now;
    next_advert_ = now + half_life;
  } else {
    // Re-arm relative to the last broadcast so the advertisement cadence
    // never exceeds lifetime/2 of silence.
    const Micros next = last_tx_ + half_life;
    next_advert_ = next > now ? next : now + half_life;
  }
  check_termination(now);
  return out;
}

}  // namespace dragoncast
