#include "s5p/game.hpp"

#include <algorithm>
#include <string>

#include "s5p/error.hpp"

namespace s5p {

namespace {

void check_k(PartitionId k) {
  if (k == 0) throw ConfigError("partition count k must be at least 1");
}

PartitionId pick_best(std::span<const double> costs, PartitionId current) {
  PartitionId best = current;
  for (PartitionId p = 0; p < costs.size(); ++p) {
    if (costs[p] < costs[best]) best = p;
  }
  return best;
}

// Best response for c; `scratch` must hold k doubles.
PartitionId respond(ClusterId c, const GameState& state, std::span<double> scratch) {
  cluster_costs(c, state, scratch);
  return pick_best(scratch, state.c2p[c]);
}

std::uint64_t play_stage(GameState& state, ClusterId first, ClusterId last, std::size_t batch_size,
                         unsigned threads, const GameHooks& hooks) {
  std::uint64_t moves = 0;
  std::vector<PartitionId> targets(batch_size);
  std::vector<double> apply_scratch(state.k);

  for (ClusterId begin = first; begin < last;) {
    const ClusterId end = static_cast<ClusterId>(std::min<std::uint64_t>(last, std::uint64_t{begin} + batch_size));
    const auto count = static_cast<std::int64_t>(end - begin);
    const GameState& snapshot = state;

    if (threads > 1 && count > 1) {
#pragma omp parallel num_threads(static_cast<int>(threads))
      {
        std::vector<double> scratch(snapshot.k);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) {
          const auto c = static_cast<ClusterId>(begin + i);
          targets[static_cast<std::size_t>(i)] = respond(c, snapshot, scratch);
        }
      }
    } else {
      for (std::int64_t i = 0; i < count; ++i) {
        const auto c = static_cast<ClusterId>(begin + i);
        targets[static_cast<std::size_t>(i)] = respond(c, snapshot, apply_scratch);
      }
    }

    // Apply in ascending id; a response computed on the snapshot is only
    // taken if it still strictly improves on the live profile.
    for (std::int64_t i = 0; i < count; ++i) {
      const auto c = static_cast<ClusterId>(begin + i);
      const PartitionId to = targets[static_cast<std::size_t>(i)];
      const PartitionId from = state.c2p[c];
      if (to == from) continue;
      if (count > 1) {
        cluster_costs(c, state, apply_scratch);
        if (!(apply_scratch[to] < apply_scratch[from])) continue;
      }
      state.move(c, to);
      ++moves;
      if (hooks.on_move) hooks.on_move(c, from, to);
    }
    begin = end;
  }
  return moves;
}

}  // namespace

void GameState::assign(std::span<const PartitionId> profile) {
  if (graph == nullptr) throw ConfigError("game state has no cluster graph");
  if (profile.size() != graph->cluster_count()) throw ConfigError("profile size does not match cluster count");
  c2p.assign(profile.begin(), profile.end());
  part_size.assign(k, 0);
  for (ClusterId c = 0; c < c2p.size(); ++c) {
    if (c2p[c] >= k) throw ConfigError("profile assigns partition " + std::to_string(c2p[c]) + " >= k");
    part_size[c2p[c]] += graph->size(c);
  }
}

void GameState::move(ClusterId c, PartitionId to) {
  const PartitionId from = c2p[c];
  if (from == to) return;
  const std::int64_t s = graph->size(c);
  part_size[from] -= s;
  part_size[to] += s;
  c2p[c] = to;
}

double compute_delta(const ClusterGraph& graph, PartitionId k) {
  check_k(k);
  const auto total = static_cast<double>(graph.total_size());
  if (!(total > 0.0)) throw DomainError("normalization undefined: total cluster size is zero");
  double mass = 0.0;
  for (ClusterId c = 0; c < graph.cluster_count(); ++c) {
    mass += static_cast<double>(graph.theta_total(c)) + static_cast<double>(graph.size(c));
  }
  return static_cast<double>(k) * mass / (total * total);
}

double delta_lower_bound(const ClusterGraph& graph) {
  const auto total = static_cast<double>(graph.total_size());
  if (!(total > 0.0)) throw DomainError("normalization undefined: total cluster size is zero");
  return 1.0 / total;
}

GameState init_game(const ClusterGraph& graph, const GameConfig& cfg) {
  check_k(cfg.k);
  if (cfg.max_rounds == 0) throw ConfigError("max_rounds must be at least 1");
  if (cfg.batch_size == 0) throw ConfigError("batch_size must be at least 1");
  GameState state;
  state.graph = &graph;
  state.k = cfg.k;
  std::vector<PartitionId> profile(graph.cluster_count());
  for (ClusterId c = 0; c < profile.size(); ++c) profile[c] = c % cfg.k;
  state.assign(profile);
  state.delta = compute_delta(graph, cfg.k);
  return state;
}

void cluster_costs(ClusterId c, const GameState& state, std::span<double> out) {
  const ClusterGraph& g = *state.graph;
  const PartitionId k = state.k;
  std::fill(out.begin(), out.begin() + k, 0.0);

  // out[p] temporarily holds the count to neighbors inside p.
  const auto nbrs = g.neighbors(c);
  const auto theta = g.neighbor_theta(c);
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    out[state.c2p[nbrs[i]]] += static_cast<double>(theta[i]);
  }
  const auto size = static_cast<double>(g.size(c));
  const auto total = static_cast<double>(g.theta_total(c));
  const double kk = static_cast<double>(k);
  const PartitionId current = state.c2p[c];
  for (PartitionId p = 0; p < k; ++p) {
    const double load = static_cast<double>(state.part_size[p]) + (p == current ? 0.0 : size);
    const double cut = total - out[p];
    out[p] = state.delta / kk * size * load + (cut + size) / kk;
  }
}

double cluster_cost(ClusterId c, PartitionId p, const GameState& state) {
  if (p >= state.k) throw ConfigError("partition id out of range");
  std::vector<double> costs(state.k);
  cluster_costs(c, state, costs);
  return costs[p];
}

PartitionId best_response(ClusterId c, const GameState& state) {
  std::vector<double> costs(state.k);
  return respond(c, state, costs);
}

double social_welfare(const GameState& state) {
  const ClusterGraph& g = *state.graph;
  const double kk = static_cast<double>(state.k);
  double balance = 0.0;
  double volume = 0.0;
  for (auto s : state.part_size) {
    balance += static_cast<double>(s) * static_cast<double>(s);
    volume += static_cast<double>(s);
  }
  // Each cut edge count is seen once from each side, matching the sum over
  // partitions of the count leaving that partition.
  double cut = 0.0;
  for (ClusterId c = 0; c < g.cluster_count(); ++c) {
    const auto nbrs = g.neighbors(c);
    const auto theta = g.neighbor_theta(c);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (state.c2p[nbrs[i]] != state.c2p[c]) cut += static_cast<double>(theta[i]);
    }
  }
  return state.delta * balance / kk + (cut + volume) / kk;
}

GameReport run_game(GameState& state, const GameConfig& cfg, const GameHooks& hooks) {
  if (cfg.max_rounds == 0) throw ConfigError("max_rounds must be at least 1");
  const std::size_t batch = cfg.deterministic ? 1 : std::max<std::size_t>(1, cfg.batch_size);
  const unsigned threads = cfg.deterministic ? 1 : std::max(1u, cfg.threads);
  const ClusterGraph& g = *state.graph;

  GameReport report;
  while (report.rounds < cfg.max_rounds) {
    std::uint64_t moves = play_stage(state, 0, g.head_count(), batch, threads, hooks);
    moves += play_stage(state, g.head_count(), g.cluster_count(), batch, threads, hooks);
    ++report.rounds;
    ++state.round;
    report.moves += moves;

    RoundStats stats{state.round, moves, social_welfare(state)};
    report.history.push_back(stats);
    if (hooks.on_round) hooks.on_round(stats);
    if (moves == 0) {
      report.converged = true;
      break;
    }
  }
  return report;
}

}  // namespace s5p
