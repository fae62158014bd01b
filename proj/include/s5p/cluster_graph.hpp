#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "s5p/clustering.hpp"
#include "s5p/count_min_sketch.hpp"
#include "s5p/graph_io.hpp"
#include "s5p/types.hpp"

namespace s5p {

enum class ClusterKind : std::uint8_t { Head, Tail };

/// Where inter-cluster edge counts come from.
enum class ThetaMode { Sketch, Exact };

/// Inter-cluster edge count between two distinct clusters.
struct ClusterPair {
  ClusterId a = 0;
  ClusterId b = 0;
  std::uint64_t count = 0;
};

/// Cluster-level summary of the graph: sizes, kinds, the symmetric neighbor
/// relation and edge counts between neighboring clusters. Cluster ids are
/// global: head clusters first, then tail clusters.
class ClusterGraph {
 public:
  /// One pass over the stream. Head edges link the head clusters of their
  /// endpoints, tail edges the tail clusters; a tail edge whose endpoint u
  /// also has a head cluster additionally links head(u) with tail(v).
  static ClusterGraph build(const EdgeStream& stream, const ClusterState& state,
                            const DegreeTable& degrees, const ClusteringConfig& clustering,
                            ThetaMode mode, const SketchConfig& sketch = {});

  /// Exact-count graph from explicit sizes and pair counts. Clusters below
  /// `head_count` are head clusters.
  static ClusterGraph from_pairs(std::vector<std::int64_t> sizes, ClusterId head_count,
                                 std::span<const ClusterPair> pairs);

  ClusterId cluster_count() const noexcept { return static_cast<ClusterId>(size_.size()); }
  ClusterId head_count() const noexcept { return head_count_; }
  ClusterKind kind(ClusterId c) const noexcept {
    return c < head_count_ ? ClusterKind::Head : ClusterKind::Tail;
  }
  std::int64_t size(ClusterId c) const { return size_[c]; }
  std::span<const std::int64_t> sizes() const noexcept { return size_; }
  std::int64_t total_size() const noexcept { return total_size_; }

  std::span<const ClusterId> neighbors(ClusterId c) const {
    return {adj_.data() + offset_[c], adj_.data() + offset_[c + 1]};
  }
  /// Edge counts aligned with `neighbors(c)`.
  std::span<const std::uint64_t> neighbor_theta(ClusterId c) const {
    return {weight_.data() + offset_[c], weight_.data() + offset_[c + 1]};
  }
  /// Sum of counts to all neighbors.
  std::uint64_t theta_total(ClusterId c) const { return theta_total_[c]; }

  /// Edge count between two clusters (0 when they are not neighbors).
  std::uint64_t theta(ClusterId a, ClusterId b) const;

  ThetaMode mode() const noexcept { return mode_; }
  const CountMinSketch* sketch() const noexcept { return sketch_ ? &*sketch_ : nullptr; }

  /// Every neighboring pair once, a < b.
  std::vector<ClusterPair> pairs() const;

  std::size_t memory_bytes() const;

 private:
  ClusterGraph() = default;
  // Builds the CSR adjacency from sorted unique pair keys and their counts.
  void finalize(std::span<const std::uint64_t> keys, std::span<const std::uint64_t> counts);

  ThetaMode mode_ = ThetaMode::Exact;
  ClusterId head_count_ = 0;
  std::vector<std::int64_t> size_;
  std::int64_t total_size_ = 0;
  std::vector<std::uint64_t> offset_;
  std::vector<ClusterId> adj_;
  std::vector<std::uint64_t> weight_;
  std::vector<std::uint64_t> theta_total_;
  std::optional<CountMinSketch> sketch_;
};

}  // namespace s5p
