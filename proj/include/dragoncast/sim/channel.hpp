#pragma once

#include <cstdint>
#include <vector>

#include "dragoncast/types.hpp"

namespace dragoncast {

// Unit-disk reception: every node other than the sender whose position at
// transmission start is within radio_range, in node-id order.
std::vector<NodeId> in_range_nodes(const std::vector<Vec2>& positions,
                                   NodeId sender, double radio_range);

// Bookkeeping for the optional overlap collision model: a receiver that is
// inside two transmissions whose [start, end] intervals intersect gets
// neither. Deliberately simpler than a real MAC (no capture, no carrier
// sense); the Bernoulli loss draw happens outside.
class CollisionTracker {
 public:
  using TxId = std::uint32_t;

  // Register a transmission and mark pairwise collisions with every active
  // transmission sharing a receiver.
  TxId begin(Micros start, Micros end, const std::vector<NodeId>& receivers);

  // True when the receiver lost this transmission to a collision.
  bool collided(TxId tx, NodeId receiver) const;

  // Forget a finished transmission.
  void finish(TxId tx);

 private:
  struct Active {
    TxId id;
    Micros start, end;
    std::vector<NodeId> receivers;
    std::vector<bool> collided;
  };
  const Active* find(TxId tx) const;

  std::vector<Active> active_;
  TxId next_id_ = 1;
};

}  // namespace dragoncast
