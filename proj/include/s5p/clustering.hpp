#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "s5p/graph_io.hpp"
#include "s5p/types.hpp"

namespace s5p {

struct ClusteringConfig {
  /// Degree threshold separating head from tail vertices.
  double xi = 0.0;
  double beta = 1.0;
  /// Maximum cluster volume; migrations never push a cluster to or past it.
  double kappa = 0.0;
  /// Bounded variant: no volume cap, global degrees for tail edges too.
  bool bounded = false;

  /// xi = beta * 2|E|/|V|, kappa = 2|E|/k.
  static ClusteringConfig standard(std::uint64_t edge_count, VertexId vertex_count, PartitionId k,
                                   double beta = 1.0, bool bounded = false);
};

/// Vertex-to-cluster tables built by one streaming pass. Head and tail
/// clusters are numbered independently from 0 in allocation order; the
/// cluster graph places tail ids after all head ids.
struct ClusterState {
  std::vector<ClusterId> head_of;
  std::vector<ClusterId> tail_of;
  std::vector<std::int64_t> head_vol;
  std::vector<std::int64_t> tail_vol;
  /// Tail-local degree: tail-edge endpoint occurrences seen so far.
  std::vector<std::uint64_t> ld;

  ClusterState() = default;
  explicit ClusterState(VertexId vertex_count)
      : head_of(vertex_count, kNoCluster), tail_of(vertex_count, kNoCluster), ld(vertex_count, 0) {}

  ClusterId head_count() const { return static_cast<ClusterId>(head_vol.size()); }
  ClusterId tail_count() const { return static_cast<ClusterId>(tail_vol.size()); }
  ClusterId cluster_count() const { return head_count() + tail_count(); }
  /// Position of a tail cluster in the combined id space.
  ClusterId global_tail(ClusterId tail) const { return head_count() + tail; }

  std::size_t memory_bytes() const;
  friend bool operator==(const ClusterState&, const ClusterState&) = default;
};

void head_edge_step(VertexId u, VertexId v, ClusterState& state, const DegreeTable& degrees,
                    const ClusteringConfig& cfg);
void tail_edge_step(VertexId u, VertexId v, ClusterState& state, const DegreeTable& degrees,
                    const ClusteringConfig& cfg);

ClusterState cluster_stream(const EdgeStream& stream, const DegreeTable& degrees,
                            const ClusteringConfig& cfg);

/// Debug dump, one "v head_cluster tail_cluster" line per vertex (-1 for none).
void write_cluster_dump(const std::filesystem::path& path, const EdgeStream& stream,
                        const ClusterState& state);

}  // namespace s5p
