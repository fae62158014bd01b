#include "s5p/clustering.hpp"

#include <fstream>
#include <string>

#include "s5p/error.hpp"

namespace s5p {

namespace {

ClusterId allocate(std::vector<ClusterId>& table, std::vector<std::int64_t>& vol, VertexId v,
                   std::int64_t initial) {
  if (table[v] == kNoCluster) {
    table[v] = static_cast<ClusterId>(vol.size());
    vol.push_back(initial);
  }
  return table[v];
}

// Moves `i` into `j`'s cluster, carrying `stake` of volume with it.
void migrate(std::vector<ClusterId>& table, std::vector<std::int64_t>& vol, VertexId i, VertexId j,
             std::int64_t stake) {
  vol[table[j]] += stake;
  vol[table[i]] -= stake;
  table[i] = table[j];
}

}  // namespace

ClusteringConfig ClusteringConfig::standard(std::uint64_t edge_count, VertexId vertex_count,
                                            PartitionId k, double beta, bool bounded) {
  if (k == 0) throw ConfigError("partition count k must be at least 1");
  ClusteringConfig cfg;
  cfg.beta = beta;
  cfg.xi = degree_threshold(edge_count, vertex_count, beta);
  cfg.kappa = 2.0 * static_cast<double>(edge_count) / static_cast<double>(k);
  cfg.bounded = bounded;
  return cfg;
}

std::size_t ClusterState::memory_bytes() const {
  return (head_of.capacity() + tail_of.capacity()) * sizeof(ClusterId) +
         (head_vol.capacity() + tail_vol.capacity()) * sizeof(std::int64_t) +
         ld.capacity() * sizeof(std::uint64_t);
}

void head_edge_step(VertexId u, VertexId v, ClusterState& state, const DegreeTable& degrees,
                    const ClusteringConfig& cfg) {
  auto& table = state.head_of;
  auto& vol = state.head_vol;
  const auto du = static_cast<std::int64_t>(degrees[u]);
  const auto dv = static_cast<std::int64_t>(degrees[v]);

  // A vertex adds its global degree to a cluster when it first joins one.
  allocate(table, vol, u, du);
  allocate(table, vol, v, dv);
  if (table[u] == table[v]) return;

  const auto kappa = cfg.kappa;
  const bool capped = !cfg.bounded;
  if (capped && !(static_cast<double>(vol[table[u]]) < kappa &&
                  static_cast<double>(vol[table[v]]) < kappa)) {
    return;
  }
  const std::int64_t stake_u = vol[table[u]] - du;
  const std::int64_t stake_v = vol[table[v]] - dv;
  VertexId i = u;
  VertexId j = v;
  if (stake_v < stake_u || (stake_v == stake_u && v < u)) std::swap(i, j);

  const auto di = static_cast<std::int64_t>(degrees[i]);
  if (capped && !(static_cast<double>(vol[table[j]] + di) < kappa)) return;
  migrate(table, vol, i, j, di);
}

void tail_edge_step(VertexId u, VertexId v, ClusterState& state, const DegreeTable& degrees,
                    const ClusteringConfig& cfg) {
  auto& table = state.tail_of;
  auto& vol = state.tail_vol;

  if (cfg.bounded) {
    allocate(table, vol, u, static_cast<std::int64_t>(degrees[u]));
    allocate(table, vol, v, static_cast<std::int64_t>(degrees[v]));
  } else {
    allocate(table, vol, u, 0);
    allocate(table, vol, v, 0);
    ++vol[table[u]];
    ++vol[table[v]];
  }
  ++state.ld[u];
  ++state.ld[v];
  if (table[u] == table[v]) return;

  if (!cfg.bounded && !(static_cast<double>(vol[table[u]]) < cfg.kappa &&
                        static_cast<double>(vol[table[v]]) < cfg.kappa)) {
    return;
  }
  VertexId i = u;
  VertexId j = v;
  const auto vol_u = vol[table[u]];
  const auto vol_v = vol[table[v]];
  if (vol_v < vol_u || (vol_v == vol_u && v < u)) std::swap(i, j);

  const auto stake = cfg.bounded ? static_cast<std::int64_t>(degrees[i])
                                 : static_cast<std::int64_t>(state.ld[i]);
  migrate(table, vol, i, j, stake);
}

ClusterState cluster_stream(const EdgeStream& stream, const DegreeTable& degrees,
                            const ClusteringConfig& cfg) {
  if (!cfg.bounded && !(cfg.kappa > 0.0)) throw ConfigError("cluster volume cap kappa must be positive");
  ClusterState state(stream.vertex_count());
  stream.for_each([&](EdgeIndex, const Edge& e) {
    if (classify_edge(e, degrees, cfg.xi) == EdgeKind::Head) {
      head_edge_step(e.u, e.v, state, degrees, cfg);
    } else {
      tail_edge_step(e.u, e.v, state, degrees, cfg);
    }
  });
  return state;
}

void write_cluster_dump(const std::filesystem::path& path, const EdgeStream& stream,
                        const ClusterState& state) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write cluster dump " + path.string());
  auto id = [](ClusterId c) { return c == kNoCluster ? std::string("-1") : std::to_string(c); };
  for (VertexId v = 0; v < state.head_of.size(); ++v) {
    out << stream.original_id(v) << ' ' << id(state.head_of[v]) << ' ' << id(state.tail_of[v]) << '\n';
  }
  if (!out) throw IoError("failed writing cluster dump " + path.string());
}

}  // namespace s5p
