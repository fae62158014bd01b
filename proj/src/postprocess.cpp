#include "s5p/postprocess.hpp"

#include <string>

#include "s5p/error.hpp"

namespace s5p {

std::vector<PartitionId> ReplicaTable::partitions(VertexId v) const {
  std::vector<PartitionId> out;
  for (PartitionId p = 0; p < k_; ++p) {
    if (contains(v, p)) out.push_back(p);
  }
  return out;
}

double PostprocessConfig::load_cap(std::uint64_t edge_count, PartitionId k) const {
  if (k == 0) throw ConfigError("partition count k must be at least 1");
  return tau * static_cast<double>(edge_count) / static_cast<double>(k);
}

PartitionId place_edge(EdgeKind kind, PartitionId pu, PartitionId pv,
                       std::span<const std::uint64_t> load, double cap, bool capped) {
  auto has_space = [&](PartitionId p) { return !capped || static_cast<double>(load[p]) < cap; };
  const bool space_u = has_space(pu);
  const bool space_v = has_space(pv);
  if (!space_u && !space_v) {
    const auto k = static_cast<PartitionId>(load.size());
    if (kind == EdgeKind::Head) {
      for (PartitionId p = 0; p < k; ++p) {
        if (has_space(p)) return p;
      }
    } else {
      for (PartitionId p = k; p-- > 0;) {
        if (has_space(p)) return p;
      }
    }
    throw ConsistencyError("no partition has space under load cap " + std::to_string(cap));
  }
  if (space_u != space_v) return space_u ? pu : pv;
  return load[pu] > load[pv] ? pv : pu;
}

PartitionResult assign_edges(const EdgeStream& stream, const DegreeTable& degrees,
                             const ClusteringConfig& clustering, const ClusterState& state,
                             std::span<const PartitionId> c2p, PartitionId k,
                             const PostprocessConfig& cfg, const EdgeSink& sink) {
  if (k == 0) throw ConfigError("partition count k must be at least 1");
  if (c2p.size() != state.cluster_count()) throw ConfigError("c2p size does not match cluster count");
  if (!cfg.bounded && cfg.tau < 1.0) throw ConfigError("tau below 1 cannot place every edge");

  PartitionResult result;
  result.k = k;
  result.edge_count = stream.edge_count();
  result.load.assign(k, 0);
  result.replicas = ReplicaTable(stream.vertex_count(), k);
  if (cfg.keep_assignment) result.assignment.reserve(stream.edge_count());

  const double cap = cfg.load_cap(stream.edge_count(), k);
  const bool capped = !cfg.bounded;
  const ClusterId nh = state.head_count();

  stream.for_each([&](EdgeIndex index, const Edge& e) {
    const EdgeKind kind = classify_edge(e, degrees, clustering.xi);
    ClusterId cu;
    ClusterId cv;
    if (kind == EdgeKind::Head) {
      cu = state.head_of[e.u];
      cv = state.head_of[e.v];
    } else {
      cu = state.tail_of[e.u] == kNoCluster ? kNoCluster : nh + state.tail_of[e.u];
      cv = state.tail_of[e.v] == kNoCluster ? kNoCluster : nh + state.tail_of[e.v];
    }
    if (cu == kNoCluster || cv == kNoCluster) {
      throw ConsistencyError("edge " + std::to_string(index) + " has an endpoint without a cluster");
    }
    const PartitionId p = place_edge(kind, c2p[cu], c2p[cv], result.load, cap, capped);
    ++result.load[p];
    result.replicas.add(e.u, p);
    result.replicas.add(e.v, p);
    if (cfg.keep_assignment) result.assignment.push_back(p);
    if (sink) sink(index, e, p);
  });
  return result;
}

}  // namespace s5p
