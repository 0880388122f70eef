#include "dragoncast/sim/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace dragoncast {

std::vector<NodeId> in_range_nodes(const std::vector<Vec2>& positions,
                                   NodeId sender, double radio_range) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i == sender) continue;
    if (distance(positions[sender], positions[i]) <= radio_range)
      out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

CollisionTracker::TxId CollisionTracker::begin(Micros start, Micros end,
                                               const std::vector<NodeId>& receivers) {
  Active tx{next_id_++, start, end, receivers,
            std::vector<bool>(receivers.size(), false)};
  for (auto& other : active_) {
    if (other.end < start || end < other.start) continue;  // no time overlap
    for (std::size_t i = 0; i < tx.receivers.size(); ++i) {
      const auto it = std::find(other.receivers.begin(), other.receivers.end(),
                                tx.receivers[i]);
      if (it == other.receivers.end()) continue;
      tx.collided[i] = true;
      other.collided[static_cast<std::size_t>(it - other.receivers.begin())] = true;
    }
  }
  active_.push_back(std::move(tx));
  return active_.back().id;
}

const CollisionTracker::Active* CollisionTracker::find(TxId tx) const {
  for (const auto& a : active_)
    if (a.id == tx) return &a;
  return nullptr;
}

bool CollisionTracker::collided(TxId tx, NodeId receiver) const {
  const Active* a = find(tx);
  if (!a) throw std::logic_error("unknown transmission id");
  const auto it = std::find(a->receivers.begin(), a->receivers.end(), receiver);
  if (it == a->receivers.end()) throw std::logic_error("receiver not in transmission");
  return a->collided[static_cast<std::size_t>(it - a->receivers.begin())];
}

void CollisionTracker::finish(TxId tx) {
  for (auto it = active_.begin(); it != active_.end(); ++it)
    if (it->id == tx) {
      active_.erase(it);
      return;
    }
  throw std::logic_error("finishing an unknown transmission");
}

}  // namespace dragoncast
