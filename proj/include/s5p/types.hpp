#pragma once

#include <cstdint>
#include <limits>

namespace s5p {

/// Dense vertex id after compaction, in [0, |V|).
using VertexId = std::uint32_t;
/// Position of an edge in stream order.
using EdgeIndex = std::uint64_t;
using ClusterId = std::uint32_t;
using PartitionId = std::uint32_t;

inline constexpr ClusterId kNoCluster = std::numeric_limits<ClusterId>::max();

struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class EdgeKind : std::uint8_t { Head, Tail };

}  // namespace s5p
