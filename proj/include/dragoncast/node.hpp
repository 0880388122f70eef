#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dragoncast/decoder.hpp"
#include "dragoncast/neighbor_table.hpp"
#include "dragoncast/rate.hpp"
#include "dragoncast/rng.hpp"

namespace dragoncast {

enum class NodePhase { idle, active, stopped };

enum class NodeRole { source, relay };

struct NodeParams {
  NodeId id = 0;
  NodeRole role = NodeRole::relay;
  FieldOrder field = FieldOrder::gf2;
  std::uint16_t generation_size = 0;  // D
  std::size_t payload_size = 0;
  std::uint16_t window = 0;           // K; K == D disables the sliding window
  Micros lifetime = 0;                // advertisement validity
  double source_rate = 0.0;           // C_s, source injection rate
  RatePolicy policy;
  double jitter = 0.0;                // +/- fraction applied to timer delays
};

// One outgoing broadcast produced by a timer event.
struct Broadcast {
  CodedPacket packet;
  std::uint16_t window_lo = 0;  // window used for encoding (0 for control)
  std::uint16_t window_hi = 0;
};

struct ReceiveResult {
  std::optional<IngestOutcome> ingest;  // set for data packets only
  bool activated = false;               // idle -> active on this packet
  bool restarted = false;               // stopped -> active on this packet
};

// Protocol state machine for one node. Event-driven and deterministic: the
// driver (simulator or a real-network shim) feeds receptions and fires the
// two timers this class exposes, and broadcasts whatever the calls return.
//
// The source is a node whose decoder starts at full rank; it injects at rate
// C_s and only offers the first ceil(C_s * t) source packets for encoding,
// so relays can never outrank the injection clock.
class Node {
 public:
  // source_payloads must hold exactly D payloads for the source role and is
  // ignored for relays.
  Node(const NodeParams& params, Rng coeff_rng, Rng jitter_rng,
       const std::vector<std::vector<std::uint8_t>>* source_payloads = nullptr);

  NodeId id() const { return params_.id; }
  NodeRole role() const { return params_.role; }
  NodePhase phase() const { return phase_; }
  const DecoderState& decoder() const { return decoder_; }
  const NeighborTable& neighbors() const { return neighbors_; }
  std::uint16_t rank() const { return decoder_.rank(); }
  std::uint16_t generation_size() const { return params_.generation_size; }

  // Source packets available for encoding by the injection clock; D for
  // relays (their buffer itself is the limit).
  std::uint16_t revealed(Micros now) const;

  // Sliding encoding window [lo, hi]; nullopt when it is empty.
  struct Window {
    std::uint16_t lo = 0;
    std::uint16_t hi = 0;
  };
  std::optional<Window> select_window(Micros now) const;

  // Current transmission rate: the policy rate, raised to at least C_s at
  // the source while injection is incomplete.
  double current_rate(Micros now) const;

  ReceiveResult on_receive(const CodedPacket& pkt, Micros now);
  std::optional<Broadcast> on_data_timer(Micros now);
  std::optional<Broadcast> on_advert_timer(Micros now);

  // Pending timers for the driver to mirror into its event queue.
  std::optional<Micros> next_data_time() const { return next_data_; }
  std::optional<Micros> next_advert_time() const { return next_advert_; }

  std::vector<SourcePacket> take_decoded() { return decoder_.take_decoded(); }

  std::uint64_t data_sent() const { return data_sent_; }
  Micros last_broadcast() const { return last_tx_; }

 private:
  PiggybackHeader make_header(bool control) const;
  Micros jittered_delay(Micros delay);
  void schedule_from(Micros now, bool only_shorten);
  void check_termination(Micros now);
  bool source_injecting(Micros now) const;

  NodeParams params_;
  DecoderState decoder_;
  NeighborTable neighbors_;
  NodePhase phase_ = NodePhase::idle;
  Rng coeff_rng_;
  Rng jitter_rng_;
  std::optional<Micros> next_data_;
  std::optional<Micros> next_advert_;
  Micros last_tx_ = 0;
  std::uint64_t data_sent_ = 0;
};

}  // namespace dragoncast
