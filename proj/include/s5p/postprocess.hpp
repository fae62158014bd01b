#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "s5p/clustering.hpp"
#include "s5p/graph_io.hpp"
#include "s5p/types.hpp"

namespace s5p {

/// Per-vertex set of partitions holding a replica, as a k-bit row per vertex.
class ReplicaTable {
 public:
  ReplicaTable() = default;
  ReplicaTable(VertexId vertex_count, PartitionId k)
      : k_(k), words_((k + 63) / 64), bits_(static_cast<std::size_t>(vertex_count) * words_, 0) {}

  void add(VertexId v, PartitionId p) { bits_[index(v, p)] |= bit(p); }
  bool contains(VertexId v, PartitionId p) const { return (bits_[index(v, p)] & bit(p)) != 0; }
  std::uint32_t count(VertexId v) const {
    std::uint32_t n = 0;
    for (std::size_t w = 0; w < words_; ++w) n += std::popcount(bits_[v * words_ + w]);
    return n;
  }
  std::vector<PartitionId> partitions(VertexId v) const;

  VertexId vertex_count() const { return words_ == 0 ? 0 : static_cast<VertexId>(bits_.size() / words_); }
  PartitionId k() const { return k_; }
  std::size_t memory_bytes() const { return bits_.capacity() * sizeof(std::uint64_t); }

  friend bool operator==(const ReplicaTable&, const ReplicaTable&) = default;

 private:
  std::size_t index(VertexId v, PartitionId p) const { return static_cast<std::size_t>(v) * words_ + p / 64; }
  static std::uint64_t bit(PartitionId p) { return std::uint64_t{1} << (p % 64); }

  PartitionId k_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct PartitionResult {
  PartitionId k = 0;
  std::uint64_t edge_count = 0;
  /// Edge index -> partition, in stream order. Empty when not retained.
  std::vector<PartitionId> assignment;
  /// Edges per partition.
  std::vector<std::uint64_t> load;
  ReplicaTable replicas;

  std::size_t memory_bytes() const {
    return assignment.capacity() * sizeof(PartitionId) + load.capacity() * sizeof(std::uint64_t) +
           replicas.memory_bytes();
  }
};

/// Receives each placement as it is made.
using EdgeSink = std::function<void(EdgeIndex, const Edge&, PartitionId)>;

struct PostprocessConfig {
  /// Imbalance threshold.
  double tau = 1.0;
  /// Bounded variant: no load cap.
  bool bounded = false;
  /// Keep the edge -> partition vector in the result.
  bool keep_assignment = true;

  /// L = tau |E| / k.
  double load_cap(std::uint64_t edge_count, PartitionId k) const;
};

/// Placement rule for one edge given its endpoint partitions. A partition
/// has space while its load is below `cap`. When neither endpoint partition
/// has space, head edges take the first partition with space scanning from
/// 0 upward and tail edges scanning from k-1 downward. Otherwise the edge
/// goes to the one with space, or to the less loaded (P_u on ties).
PartitionId place_edge(EdgeKind kind, PartitionId pu, PartitionId pv,
                       std::span<const std::uint64_t> load, double cap, bool capped);

/// One pass mapping each edge through its endpoints' clusters (head tables
/// for head edges, tail tables for tail edges) and `c2p` to a partition.
/// `c2p` is indexed by global cluster id (tail ids after head ids).
PartitionResult assign_edges(const EdgeStream& stream, const DegreeTable& degrees,
                             const ClusteringConfig& clustering, const ClusterState& state,
                             std::span<const PartitionId> c2p, PartitionId k,
                             const PostprocessConfig& cfg, const EdgeSink& sink = {});

}  // namespace s5p
