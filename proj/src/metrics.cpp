#include "s5p/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "s5p/error.hpp"

namespace s5p {

double replication_factor(const ReplicaTable& replicas) {
  std::uint64_t total = 0;
  std::uint64_t present = 0;
  for (VertexId v = 0; v < replicas.vertex_count(); ++v) {
    const auto n = replicas.count(v);
    total += n;
    present += n > 0 ? 1 : 0;
  }
  if (present == 0) throw DomainError("replication factor of an empty graph");
  return static_cast<double>(total) / static_cast<double>(present);
}

double replication_factor(const PartitionResult& result) { return replication_factor(result.replicas); }

ReplicaTable replicas_from_assignment(const EdgeStream& stream, std::span<const PartitionId> assignment,
                                      PartitionId k) {
  if (assignment.size() != stream.edge_count()) {
    throw ConsistencyError("assignment length " + std::to_string(assignment.size()) +
                           " does not match edge count " + std::to_string(stream.edge_count()));
  }
  ReplicaTable table(stream.vertex_count(), k);
  stream.for_each([&](EdgeIndex i, const Edge& e) {
    const PartitionId p = assignment[i];
    if (p >= k) throw ConsistencyError("partition id out of range");
    table.add(e.u, p);
    table.add(e.v, p);
  });
  return table;
}

double imbalance(std::span<const std::uint64_t> loads, std::uint64_t edge_count) {
  if (edge_count == 0 || loads.empty()) throw DomainError("imbalance of an empty partitioning");
  const auto max_load = *std::max_element(loads.begin(), loads.end());
  return static_cast<double>(loads.size()) * static_cast<double>(max_load) / static_cast<double>(edge_count);
}

double imbalance(const PartitionResult& result) { return imbalance(result.load, result.edge_count); }

double DegreeResolvedRF::recombine() const {
  double sum = 0.0;
  for (const auto& b : buckets) sum += b.mean_replicas * static_cast<double>(b.frequency);
  return sum / static_cast<double>(vertex_count);
}

DegreeResolvedRF degree_resolved_rf(const PartitionResult& result, const DegreeTable& degrees) {
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> acc;  // degree -> (count, replicas)
  DegreeResolvedRF out;
  for (VertexId v = 0; v < result.replicas.vertex_count(); ++v) {
    const auto n = result.replicas.count(v);
    if (n == 0) continue;
    auto& slot = acc[degrees[v]];
    ++slot.first;
    slot.second += n;
    ++out.vertex_count;
  }
  for (const auto& [d, cr] : acc) {
    out.buckets.push_back({d, cr.first, static_cast<double>(cr.second) / static_cast<double>(cr.first)});
  }
  return out;
}

std::int64_t planarization_skewness(std::uint64_t vertex_count, std::uint64_t edge_count) {
  return static_cast<std::int64_t>(edge_count) - (3 * static_cast<std::int64_t>(vertex_count) - 6);
}

SkewnessReport skewness(const DegreeTable& degrees, std::uint64_t vertex_count, std::uint64_t edge_count) {
  if (degrees.degree.empty()) throw DomainError("skewness of an empty degree table");
  SkewnessReport r;
  r.rho3 = planarization_skewness(vertex_count, edge_count);

  std::map<std::uint64_t, std::uint64_t> hist;
  double sum = 0.0;
  for (auto d : degrees.degree) {
    ++hist[d];
    sum += static_cast<double>(d);
  }
  const auto n = static_cast<double>(degrees.degree.size());
  r.mean = sum / n;
  double var = 0.0;
  for (auto d : degrees.degree) var += (static_cast<double>(d) - r.mean) * (static_cast<double>(d) - r.mean);
  r.sigma = std::sqrt(var / n);

  // Mode: most frequent degree, smallest on ties (map iterates ascending).
  std::uint64_t best_count = 0;
  for (const auto& [d, c] : hist) {
    if (c > best_count) {
      best_count = c;
      r.mode = static_cast<double>(d);
    }
  }

  std::vector<std::uint64_t> sorted(degrees.degree);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  r.median = m % 2 == 1 ? static_cast<double>(sorted[m / 2])
                        : 0.5 * (static_cast<double>(sorted[m / 2 - 1]) + static_cast<double>(sorted[m / 2]));

  if (r.sigma > 0.0) {
    r.rho1 = (r.mean - r.mode) / r.sigma;
    r.rho2 = 3.0 * (r.mean - r.median) / r.sigma;
  } else {
    r.zero_variance = true;
  }

  // Unweighted least squares of log f(d) on log d over degrees present.
  std::vector<std::pair<double, double>> pts;
  for (const auto& [d, c] : hist) {
    if (d > 0 && c > 0) pts.emplace_back(std::log(static_cast<double>(d)), std::log(static_cast<double>(c)));
  }
  if (pts.size() < 2) {
    r.rho = std::numeric_limits<double>::quiet_NaN();
  } else {
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    r.rho = -sxy / sxx;
  }
  return r;
}

namespace {

void check_bound_domain(const BoundInputs& in) {
  if (!(in.rho > 1.0)) throw DomainError("bound requires rho > 1");
  if (!(in.d_min >= 1.0)) throw DomainError("bound requires d_min >= 1");
  if (in.k < 2) throw DomainError("bound requires k >= 2");
  if (!(in.vertex_count >= 1.0)) throw DomainError("bound requires |V| >= 1");
}

// d_m ((k-1)/d_m)^(1-rho) + (i-1)/|V|)^-1
double tail_degree_term(const BoundInputs& in, double i) {
  const double base = std::pow((static_cast<double>(in.k) - 1.0) / in.d_min, 1.0 - in.rho);
  return in.d_min / (base + (i - 1.0) / in.vertex_count);
}

std::uint64_t term_count(double x) { return x <= 0.0 ? 0 : static_cast<std::uint64_t>(std::floor(x + 1e-9)); }

double zeta_partial(double rho, double upto) {
  double s = 0.0;
  for (std::uint64_t j = 1; j <= term_count(upto); ++j) s += std::pow(static_cast<double>(j), -rho);
  return s;
}

}  // namespace

double power_law_tail_fraction(double rho, double xi, double vertex_count) {
  if (!(vertex_count >= 1.0)) throw DomainError("tail fraction requires |V| >= 1");
  return std::min(1.0, zeta_partial(rho, xi) / vertex_count);
}

BoundInputs make_bound_inputs(double rho, PartitionId k, double d_min, double d_max, double xi,
                              double vertex_count) {
  BoundInputs in;
  in.rho = rho;
  in.k = k;
  in.d_min = d_min;
  in.d_max = d_max;
  in.xi = xi;
  in.vertex_count = vertex_count;
  in.chi_tail = power_law_tail_fraction(rho, xi, vertex_count);
  in.chi_head = 1.0 - in.chi_tail;
  in.tail_count_bound = vertex_count - vertex_count * (d_max - xi) * std::pow(d_max, -rho);
  return in;
}

double rf_bound(const BoundInputs& in) {
  check_bound_domain(in);
  if (in.chi_head < 0.0 || in.chi_tail < 0.0) throw DomainError("vertex fractions must be non-negative");
  const std::uint64_t n = term_count(in.chi_tail * in.vertex_count);
  double tail = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) tail += tail_degree_term(in, static_cast<double>(i));
  if (n > 0) tail /= in.chi_tail * in.vertex_count;
  return in.chi_head * static_cast<double>(in.k) + tail + 1.0;
}

double rd_bound(const BoundInputs& in) {
  check_bound_domain(in);
  const std::uint64_t n = term_count(in.tail_count_bound);
  double tail = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) tail += tail_degree_term(in, static_cast<double>(i));
  const double head = in.vertex_count * (1.0 - zeta_partial(in.rho, in.xi)) * in.d_max;
  return 2.0 * (tail + head + in.vertex_count);
}

double poa_bound(PartitionId k) {
  if (k == 0) throw DomainError("k must be at least 1");
  return static_cast<double>(k) + 1.0;
}

}  // namespace s5p
