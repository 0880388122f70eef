#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dragoncast/types.hpp"

namespace dragoncast {

// Local information base entry learned from one neighbor's advertisements.
struct NeighborEntry {
  NodeId node_id = 0;
  std::uint16_t rank = 0;
  std::uint16_t low_index = 0;  // neighbor's decoded prefix
  Micros expires_at = 0;
};

class NeighborTable {
 public:
  // Insert or refresh; the newest advertisement wins unconditionally.
  void upsert(NodeId id, std::uint16_t rank, std::uint16_t low_index,
              Micros expires_at);

  // Drop entries with expires_at < now; returns how many were removed.
  std::size_t expire(Micros now);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Smallest advertised decoded prefix over live entries.
  std::optional<std::uint16_t> min_low_index() const;

  // True when every live entry advertises rank >= d (vacuously true when
  // the table is empty).
  bool all_ranks_at_least(std::uint16_t d) const;

  std::vector<std::uint16_t> ranks() const;

  const std::map<NodeId, NeighborEntry>& entries() const { return entries_; }

 private:
  std::map<NodeId, NeighborEntry> entries_;
};

}  // namespace dragoncast
