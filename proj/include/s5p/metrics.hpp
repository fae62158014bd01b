#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "s5p/graph_io.hpp"
#include "s5p/postprocess.hpp"
#include "s5p/types.hpp"

namespace s5p {

struct QualityReport {
  double rf = 0.0;
  double imbalance = 0.0;
  std::vector<std::uint64_t> loads;
  double runtime_ms = 0.0;
  std::uint64_t peak_mem_bytes = 0;
};

/// Sum of replica counts over vertices holding at least one replica,
/// divided by the number of such vertices.
double replication_factor(const ReplicaTable& replicas);
double replication_factor(const PartitionResult& result);

/// Rebuilds replica sets from a stream and its edge -> partition vector.
ReplicaTable replicas_from_assignment(const EdgeStream& stream, std::span<const PartitionId> assignment,
                                      PartitionId k);

/// k * max load / |E|.
double imbalance(std::span<const std::uint64_t> loads, std::uint64_t edge_count);
double imbalance(const PartitionResult& result);

struct DegreeBucket {
  std::uint64_t degree = 0;
  /// f(d): vertices with this degree.
  std::uint64_t frequency = 0;
  /// g(d): mean replica count of those vertices.
  double mean_replicas = 0.0;
};

struct DegreeResolvedRF {
  std::vector<DegreeBucket> buckets;
  std::uint64_t vertex_count = 0;

  /// sum g(d) f(d) / |V|; equals the replication factor.
  double recombine() const;
};

DegreeResolvedRF degree_resolved_rf(const PartitionResult& result, const DegreeTable& degrees);

struct SkewnessReport {
  /// Power-law exponent from a log-log fit of the degree histogram; NaN with
  /// fewer than two distinct degrees.
  double rho = 0.0;
  /// (mean - mode) / sigma.
  double rho1 = 0.0;
  /// 3 (mean - median) / sigma.
  double rho2 = 0.0;
  /// |E| - (3|V| - 6).
  std::int64_t rho3 = 0;
  double mean = 0.0;
  double mode = 0.0;
  double median = 0.0;
  double sigma = 0.0;
  /// sigma == 0; rho1 and rho2 are reported as 0.
  bool zero_variance = false;
};

std::int64_t planarization_skewness(std::uint64_t vertex_count, std::uint64_t edge_count);
SkewnessReport skewness(const DegreeTable& degrees, std::uint64_t vertex_count, std::uint64_t edge_count);

/// Inputs of the replication-factor and round-count bounds.
struct BoundInputs {
  double rho = 2.0;
  PartitionId k = 2;
  double d_min = 1.0;
  double d_max = 1.0;
  double xi = 1.0;
  double vertex_count = 1.0;
  /// Fraction of head (high-degree) vertices.
  double chi_head = 0.0;
  /// Fraction of tail (low-degree) vertices.
  double chi_tail = 1.0;
  /// Bound on the number of tail vertices: |V| - |V| (d_M - xi) d_M^-rho.
  double tail_count_bound = 0.0;
};

/// sum_{j=1..floor(xi)} j^-rho / |V|, the tail fraction under the power-law model.
double power_law_tail_fraction(double rho, double xi, double vertex_count);

/// Fills the fractions and the tail-count bound from the power-law model.
BoundInputs make_bound_inputs(double rho, PartitionId k, double d_min, double d_max, double xi,
                              double vertex_count);

/// chi_H k + mean over i = 1..floor(chi_T |V|) of
/// d_m ((k-1)/d_m)^(1-rho) + (i-1)/|V|)^-1, plus 1.
double rf_bound(const BoundInputs& in);

/// 2 (sum_{i=1..floor(tail_count_bound)} d_m (((k-1)/d_m)^(1-rho) + (i-1)/|V|)^-1
///    + |V| (1 - sum_{i=1..floor(xi)} i^-rho) d_M + |V|).
double rd_bound(const BoundInputs& in);

/// Price-of-anarchy bound k + 1.
double poa_bound(PartitionId k);

}  // namespace s5p
