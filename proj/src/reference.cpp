#include "s5p/reference.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "s5p/error.hpp"
#include "s5p/game.hpp"

namespace s5p {

namespace {

void check_k(PartitionId k) {
  if (k == 0) throw ConfigError("partition count k must be at least 1");
}

// Odometer over k^n assignments; the first `fixed` digits stay at zero.
bool advance(std::vector<PartitionId>& digits, PartitionId k, std::size_t fixed) {
  for (std::size_t i = digits.size(); i-- > fixed;) {
    if (++digits[i] < k) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

std::uint64_t dbh_hash(std::uint64_t id, std::uint64_t seed) {
  std::uint64_t z = id ^ seed;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PartitionResult partition_dbh(const EdgeStream& stream, const DegreeTable& degrees, PartitionId k,
                              std::uint64_t seed, bool keep_assignment, const EdgeSink& sink) {
  check_k(k);
  PartitionResult result;
  result.k = k;
  result.edge_count = stream.edge_count();
  result.load.assign(k, 0);
  result.replicas = ReplicaTable(stream.vertex_count(), k);
  if (keep_assignment) result.assignment.reserve(stream.edge_count());

  stream.for_each([&](EdgeIndex index, const Edge& e) {
    const auto du = degrees[e.u];
    const auto dv = degrees[e.v];
    const VertexId pick = (du < dv || (du == dv && e.u <= e.v)) ? e.u : e.v;
    const auto p = static_cast<PartitionId>(dbh_hash(pick, seed) % k);
    ++result.load[p];
    result.replicas.add(e.u, p);
    result.replicas.add(e.v, p);
    if (keep_assignment) result.assignment.push_back(p);
    if (sink) sink(index, e, p);
  });
  return result;
}

OracleResult oracle_optimal_rf(std::span<const Edge> edges, PartitionId k, const RfOracleOptions& options) {
  check_k(k);
  if (k > 64) throw ConfigError("RF oracle supports k <= 64");
  if (edges.empty()) throw DomainError("RF oracle needs at least one edge");
  const double space = std::pow(static_cast<double>(k), static_cast<double>(edges.size()));
  if (space > kMaxRfEnumeration) {
    throw SizeGuardError("RF oracle refuses k^|E| = " + std::to_string(space) + " > 1e8 assignments");
  }

  VertexId n = 0;
  for (const auto& e : edges) n = std::max({n, e.u + 1, e.v + 1});
  std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  if (options.tau) {
    cap = static_cast<std::uint64_t>(std::ceil(*options.tau * static_cast<double>(edges.size()) / k - 1e-12));
  }

  std::vector<std::uint64_t> mask(n);
  std::vector<std::uint64_t> load(k);
  std::vector<bool> present(n, false);
  std::uint64_t vertices = 0;
  for (const auto& e : edges) {
    for (VertexId x : {e.u, e.v}) {
      if (!present[x]) {
        present[x] = true;
        ++vertices;
      }
    }
  }

  OracleResult best;
  best.opt_value = std::numeric_limits<double>::infinity();
  std::vector<PartitionId> digits(edges.size(), 0);
  const std::size_t fixed = options.fix_first ? 1 : 0;
  do {
    ++best.evaluated;
    std::fill(load.begin(), load.end(), 0);
    std::fill(mask.begin(), mask.end(), 0);
    bool feasible = true;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (++load[digits[i]] > cap) {
        feasible = false;
        break;
      }
      mask[edges[i].u] |= std::uint64_t{1} << digits[i];
      mask[edges[i].v] |= std::uint64_t{1} << digits[i];
    }
    if (!feasible) continue;
    std::uint64_t replicas = 0;
    for (auto m : mask) replicas += static_cast<std::uint64_t>(std::popcount(m));
    const double rf = static_cast<double>(replicas) / static_cast<double>(vertices);
    if (rf < best.opt_value) {
      best.opt_value = rf;
      best.arg = digits;
    }
  } while (advance(digits, k, fixed));

  if (best.arg.empty()) throw DomainError("no assignment satisfies the load cap");
  return best;
}

double welfare_of_profile(const ClusterGraph& graph, PartitionId k, double delta,
                          std::span<const PartitionId> profile) {
  std::vector<double> load(k, 0.0);
  for (ClusterId c = 0; c < graph.cluster_count(); ++c) load[profile[c]] += static_cast<double>(graph.size(c));
  double balance = 0.0;
  double volume = 0.0;
  for (double l : load) {
    balance += l * l;
    volume += l;
  }
  double cut = 0.0;
  for (const auto& p : graph.pairs()) {
    if (profile[p.a] != profile[p.b]) cut += 2.0 * static_cast<double>(p.count);
  }
  const double kk = static_cast<double>(k);
  return delta * balance / kk + (cut + volume) / kk;
}

OracleResult oracle_optimal_welfare(const ClusterGraph& graph, PartitionId k, bool fix_first) {
  check_k(k);
  if (graph.mode() != ThetaMode::Exact) throw ConfigError("welfare oracle needs exact inter-cluster counts");
  const ClusterId n = graph.cluster_count();
  if (n == 0) throw DomainError("welfare oracle needs at least one cluster");
  const double space = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (space > kMaxWelfareEnumeration) {
    throw SizeGuardError("welfare oracle refuses k^|C| = " + std::to_string(space) + " > 1e7 assignments");
  }
  const double delta = compute_delta(graph, k);

  OracleResult best;
  best.opt_value = std::numeric_limits<double>::infinity();
  std::vector<PartitionId> digits(n, 0);
  do {
    ++best.evaluated;
    const double s = welfare_of_profile(graph, k, delta, digits);
    if (s < best.opt_value) {
      best.opt_value = s;
      best.arg = digits;
    }
  } while (advance(digits, k, fix_first ? 1 : 0));
  return best;
}

}  // namespace s5p
