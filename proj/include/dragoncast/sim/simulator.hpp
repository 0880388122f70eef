#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <vector>

#include "dragoncast/node.hpp"
#include "dragoncast/sim/channel.hpp"
#include "dragoncast/sim/config.hpp"
#include "dragoncast/sim/mobility.hpp"
#include "dragoncast/sim/trace.hpp"

namespace dragoncast {

struct RunResult {
  TraceLog trace;
  bool all_stopped = false;  // every node reached Stopped before the horizon
  Micros end_time = 0;
};

// Deterministic discrete-event run of one scenario. Node 0 is the source.
// Event order is a total order over (time, node id, schedule sequence);
// every random draw comes from a per-concern (and, where it matters,
// per-node) substream of the master seed, so identical configurations
// produce identical traces.
class Simulator {
 public:
  explicit Simulator(const SimConfig& cfg);  // throws ConfigError when invalid

  RunResult run();

 private:
  enum class EventKind : std::uint8_t { data_timer, advert_timer, tx_end, sample };

  struct Event {
    Micros t;
    NodeId node;        // sample events use n_nodes as their id
    std::uint64_t seq;
    EventKind kind;
    std::uint32_t tx = 0;
  };
  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.t != b.t) return a.t > b.t;
      if (a.node != b.node) return a.node > b.node;
      return a.seq > b.seq;
    }
  };

  struct PendingTx {
    CodedPacket packet;
    NodeId sender;
    std::vector<NodeId> receivers;
    std::vector<bool> lost;
    std::uint32_t collision_id = 0;  // 0 when the collision model is off
  };

  void push(Micros t, NodeId node, EventKind kind, std::uint32_t tx = 0);
  void sync_timers(NodeId node);
  std::vector<Vec2> positions_at(Micros t);
  void handle_broadcast(NodeId sender, const Broadcast& b, Micros now);
  void deliver(const Event& ev);
  void do_sample(Micros now);
  void record(NodeId node, TraceKind kind, Micros now, std::uint32_t bytes = 0,
              std::int64_t aux1 = 0, std::int64_t aux2 = 0);
  void note_phase_changes(NodeId node, NodePhase before, Micros now);
  void check_conservation(NodeId node, Micros now) const;

  SimConfig cfg_;
  std::vector<std::vector<std::uint8_t>> source_payloads_;
  std::vector<Node> nodes_;
  std::vector<WaypointMobility> mobility_;
  Rng loss_rng_;
  CollisionTracker collisions_;
  std::uint32_t next_tx_id_ = 1;
  std::map<std::uint32_t, PendingTx> pending_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t seq_ = 0;
  std::vector<Micros> pushed_data_;    // last queued data-timer time per node
  std::vector<Micros> pushed_advert_;
  std::vector<std::uint16_t> checked_rank_;  // rank at the last invariant audit
  std::size_t stopped_count_ = 0;
  Micros last_sample_ = -1;
  TraceLog log_;
};

}  // namespace dragoncast
