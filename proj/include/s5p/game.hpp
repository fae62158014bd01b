#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "s5p/cluster_graph.hpp"
#include "s5p/types.hpp"

namespace s5p {

struct GameConfig {
  PartitionId k = 1;
  unsigned max_rounds = 50;
  /// Clusters whose best responses are computed against one shared snapshot.
  std::size_t batch_size = 256;
  unsigned threads = 16;
  /// Forces batch_size 1 on a single worker.
  bool deterministic = false;
};

/// Strategy profile of the cluster-to-partition game.
struct GameState {
  const ClusterGraph* graph = nullptr;
  PartitionId k = 1;
  /// Cluster -> partition.
  std::vector<PartitionId> c2p;
  /// Sum of member cluster sizes per partition.
  std::vector<std::int64_t> part_size;
  /// Weight of the load-balance term.
  double delta = 0.0;
  unsigned round = 0;

  /// Replaces the whole profile and recomputes partition sizes.
  void assign(std::span<const PartitionId> profile);
  /// Moves one cluster, keeping part_size consistent.
  void move(ClusterId c, PartitionId to);
};

/// Round-robin start (cluster c -> c mod k) with delta at its upper bound.
GameState init_game(const ClusterGraph& graph, const GameConfig& cfg);

/// k * sum(F(c) + |c|) / (sum |c|)^2 with F(c) the count to every neighbor,
/// i.e. every neighbor assumed to sit in another partition.
double compute_delta(const ClusterGraph& graph, PartitionId k);
/// 1 / sum |c|.
double delta_lower_bound(const ClusterGraph& graph);

/// (delta/k)|c||p'| + (F_p(c) + |c|)/k where |p'| counts c as a member of p
/// and F_p(c) sums the counts to neighbors outside p.
double cluster_cost(ClusterId c, PartitionId p, const GameState& state);

/// Cost of every partition for cluster c, written to `out` (size k).
void cluster_costs(ClusterId c, const GameState& state, std::span<double> out);

/// Lowest-cost partition; ties keep the current partition, then the lowest id.
PartitionId best_response(ClusterId c, const GameState& state);

/// delta * sum |p|^2 / k + sum (cut(p) + |p|) / k, evaluated from partition
/// aggregates rather than per-cluster costs.
double social_welfare(const GameState& state);

struct RoundStats {
  unsigned round = 0;
  std::uint64_t moves = 0;
  double welfare = 0.0;
};

struct GameReport {
  unsigned rounds = 0;
  std::uint64_t moves = 0;
  /// A full round ended without moves before the round cap.
  bool converged = false;
  std::vector<RoundStats> history;
};

struct GameHooks {
  /// Called after each applied move.
  std::function<void(ClusterId c, PartitionId from, PartitionId to)> on_move;
  /// Called at the end of each round.
  std::function<void(const RoundStats&)> on_round;
};

/// Best-response dynamics: each round lets every head cluster respond, then
/// every tail cluster. A cluster moves only for a strictly lower cost.
/// Stops after a round without moves or at the round cap.
GameReport run_game(GameState& state, const GameConfig& cfg, const GameHooks& hooks = {});

}  // namespace s5p
