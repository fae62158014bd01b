#include "s5p/cluster_graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "s5p/error.hpp"

namespace s5p {

namespace {

std::uint64_t pair_code(ClusterId a, ClusterId b) {
  if (b < a) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

ClusterId code_low(std::uint64_t code) { return static_cast<ClusterId>(code >> 32); }
ClusterId code_high(std::uint64_t code) { return static_cast<ClusterId>(code & 0xffffffffULL); }

ClusterId require(ClusterId c, VertexId v, const char* table) {
  if (c == kNoCluster) {
    throw ConsistencyError("vertex " + std::to_string(v) + " has no " + table + " cluster");
  }
  return c;
}

}  // namespace

ClusterGraph ClusterGraph::build(const EdgeStream& stream, const ClusterState& state,
                                 const DegreeTable& degrees, const ClusteringConfig& clustering,
                                 ThetaMode mode, const SketchConfig& sketch_cfg) {
  ClusterGraph g;
  g.mode_ = mode;
  g.head_count_ = state.head_count();
  g.size_.reserve(state.cluster_count());
  g.size_.insert(g.size_.end(), state.head_vol.begin(), state.head_vol.end());
  g.size_.insert(g.size_.end(), state.tail_vol.begin(), state.tail_vol.end());
  g.total_size_ = std::accumulate(g.size_.begin(), g.size_.end(), std::int64_t{0});

  std::unordered_map<std::uint64_t, std::uint64_t> exact;
  std::unordered_set<std::uint64_t> seen;
  if (mode == ThetaMode::Sketch) g.sketch_.emplace(sketch_cfg);

  auto record = [&](ClusterId a, ClusterId b) {
    if (a == b) return;
    const std::uint64_t code = pair_code(a, b);
    if (mode == ThetaMode::Exact) {
      ++exact[code];
    } else {
      g.sketch_->insert_pair(a, b);
      seen.insert(code);
    }
  };

  const ClusterId nh = g.head_count_;
  stream.for_each([&](EdgeIndex, const Edge& e) {
    if (classify_edge(e, degrees, clustering.xi) == EdgeKind::Head) {
      record(require(state.head_of[e.u], e.u, "head"), require(state.head_of[e.v], e.v, "head"));
      return;
    }
    const ClusterId tu = nh + require(state.tail_of[e.u], e.u, "tail");
    const ClusterId tv = nh + require(state.tail_of[e.v], e.v, "tail");
    record(tu, tv);
    if (state.head_of[e.u] != kNoCluster) record(state.head_of[e.u], tv);
    if (state.head_of[e.v] != kNoCluster) record(state.head_of[e.v], tu);
  });

  std::vector<std::uint64_t> keys;
  std::vector<std::uint64_t> counts;
  if (mode == ThetaMode::Exact) {
    keys.reserve(exact.size());
    for (const auto& kv : exact) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    counts.reserve(keys.size());
    for (auto key : keys) counts.push_back(exact.at(key));
  } else {
    keys.assign(seen.begin(), seen.end());
    seen = {};
    std::sort(keys.begin(), keys.end());
    counts.reserve(keys.size());
    for (auto key : keys) counts.push_back(g.sketch_->query_pair(code_low(key), code_high(key)));
  }
  g.finalize(keys, counts);
  return g;
}

ClusterGraph ClusterGraph::from_pairs(std::vector<std::int64_t> sizes, ClusterId head_count,
                                      std::span<const ClusterPair> pairs) {
  ClusterGraph g;
  g.mode_ = ThetaMode::Exact;
  g.size_ = std::move(sizes);
  if (head_count > g.size_.size()) throw ConfigError("head_count exceeds cluster count");
  g.head_count_ = head_count;
  for (auto s : g.size_) {
    if (s < 0) throw ConfigError("cluster sizes must be non-negative");
  }
  g.total_size_ = std::accumulate(g.size_.begin(), g.size_.end(), std::int64_t{0});

  std::unordered_map<std::uint64_t, std::uint64_t> exact;
  for (const auto& p : pairs) {
    if (p.a >= g.size_.size() || p.b >= g.size_.size()) throw ConfigError("pair references unknown cluster");
    if (p.a == p.b || p.count == 0) continue;
    exact[pair_code(p.a, p.b)] += p.count;
  }
  std::vector<std::uint64_t> keys;
  for (const auto& kv : exact) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint64_t> counts;
  for (auto key : keys) counts.push_back(exact.at(key));
  g.finalize(keys, counts);
  return g;
}

void ClusterGraph::finalize(std::span<const std::uint64_t> keys, std::span<const std::uint64_t> counts) {
  const std::size_t n = size_.size();
  offset_.assign(n + 1, 0);
  for (auto key : keys) {
    ++offset_[code_low(key) + 1];
    ++offset_[code_high(key) + 1];
  }
  std::partial_sum(offset_.begin(), offset_.end(), offset_.begin());
  adj_.assign(offset_[n], 0);
  weight_.assign(offset_[n], 0);
  theta_total_.assign(n, 0);
  std::vector<std::uint64_t> fill(offset_.begin(), offset_.end() - 1);
  // Keys are sorted by (low, high): appending lower partners first and then
  // higher partners leaves every adjacency list sorted.
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const ClusterId lo = code_low(keys[i]);
    const ClusterId hi = code_high(keys[i]);
    adj_[fill[hi]] = lo;
    weight_[fill[hi]++] = counts[i];
    theta_total_[hi] += counts[i];
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const ClusterId lo = code_low(keys[i]);
    const ClusterId hi = code_high(keys[i]);
    adj_[fill[lo]] = hi;
    weight_[fill[lo]++] = counts[i];
    theta_total_[lo] += counts[i];
  }
}

std::uint64_t ClusterGraph::theta(ClusterId a, ClusterId b) const {
  if (a == b) return 0;
  const auto nbrs = neighbors(a);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b);
  if (it == nbrs.end() || *it != b) return 0;
  return neighbor_theta(a)[static_cast<std::size_t>(it - nbrs.begin())];
}

std::vector<ClusterPair> ClusterGraph::pairs() const {
  std::vector<ClusterPair> out;
  for (ClusterId a = 0; a < cluster_count(); ++a) {
    const auto nbrs = neighbors(a);
    const auto w = neighbor_theta(a);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (a < nbrs[i]) out.push_back({a, nbrs[i], w[i]});
    }
  }
  return out;
}

std::size_t ClusterGraph::memory_bytes() const {
  return size_.capacity() * sizeof(std::int64_t) + offset_.capacity() * sizeof(std::uint64_t) +
         adj_.capacity() * sizeof(ClusterId) + weight_.capacity() * sizeof(std::uint64_t) +
         theta_total_.capacity() * sizeof(std::uint64_t) + (sketch_ ? sketch_->memory_bytes() : 0);
}

}  // namespace s5p
