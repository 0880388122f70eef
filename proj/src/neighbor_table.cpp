#include "dragoncast/neighbor_table.hpp"

namespace dragoncast {

void NeighborTable::upsert(NodeId id, std::uint16_t rank, std::uint16_t low_index,
                           Micros expires_at) {
  entries_[id] = NeighborEntry{id, rank, low_index, expires_at};
}

std::size_t NeighborTable::expire(Micros now) {
  std::size_t removed = 0;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second.expires_at < now) {
      it = entries_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

std::optional<std::uint16_t> NeighborTable::min_low_index() const {
  std::optional<std::uint16_t> best;
  for (const auto& [id, e] : entries_) {
    (void)id;
    if (!best || e.low_index < *best) best = e.low_index;
  }
  return best;
}

bool NeighborTable::all_ranks_at_least(std::uint16_t d) const {
  for (const auto& [id, e] : entries_) {
    (void)id;
    if (e.rank < d) return false;
  }
  return true;
}

std::vector<std::uint16_t> NeighborTable::ranks() const {
  std::vector<std::uint16_t> out;
  out.reserve(entries_.size());
  for (const auto& [id, e] : entries_) {
    (void)id;
    out.push_back(e.rank);
  }
  return out;
}

}  // namespace dragoncast
