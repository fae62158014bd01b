#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "s5p/cluster_graph.hpp"
#include "s5p/graph_io.hpp"
#include "s5p/postprocess.hpp"
#include "s5p/types.hpp"

namespace s5p {

/// 64-bit avalanche mix of (id XOR seed).
std::uint64_t dbh_hash(std::uint64_t id, std::uint64_t seed);

/// Degree-based hashing: each edge goes to hash(lower-degree endpoint) mod k,
/// the lower vertex id breaking degree ties.
PartitionResult partition_dbh(const EdgeStream& stream, const DegreeTable& degrees, PartitionId k,
                              std::uint64_t seed, bool keep_assignment = true,
                              const EdgeSink& sink = {});

struct OracleResult {
  double opt_value = 0.0;
  /// A minimizing assignment (edges for RF, clusters for welfare).
  std::vector<PartitionId> arg;
  std::uint64_t evaluated = 0;

  /// algorithm value / optimum.
  double ratio(double algorithm_value) const { return algorithm_value / opt_value; }
};

inline constexpr double kMaxRfEnumeration = 1e8;
inline constexpr double kMaxWelfareEnumeration = 1e7;

struct RfOracleOptions {
  /// When set, every partition holds at most ceil(tau |E| / k) edges.
  std::optional<double> tau;
  /// Fix the first item to partition 0 (relabeling symmetry).
  bool fix_first = true;
};

/// Minimum replication factor over all k^|E| edge assignments.
OracleResult oracle_optimal_rf(std::span<const Edge> edges, PartitionId k, const RfOracleOptions& options = {});

/// Minimum social welfare over all k^|C| cluster assignments, with delta
/// from the normalization upper bound. Requires exact inter-cluster counts.
OracleResult oracle_optimal_welfare(const ClusterGraph& graph, PartitionId k, bool fix_first = true);

/// Welfare of an explicit profile computed directly from the pair list.
double welfare_of_profile(const ClusterGraph& graph, PartitionId k, double delta,
                          std::span<const PartitionId> profile);

}  // namespace s5p
