#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "s5p/error.hpp"
#include "s5p/game.hpp"
#include "s5p/metrics.hpp"
#include "s5p/reference.hpp"
#include "s5p/synth.hpp"
#include "test_util.hpp"

using namespace s5p;
using s5p::test::TempDir;

TEST_CASE("dbh hashes the lower-degree endpoint") {
  TempDir dir;
  // Star centre 0 (degree 4) plus edge 1-2 (degrees 2 and 2: lower id 1).
  const auto s = test::stream_of(dir, {{0, 1}, {0, 2}, {3, 0}, {0, 4}, {1, 2}});
  const auto d = compute_degrees(s);
  const std::uint64_t seed = 99;
  std::vector<PartitionId> seen;
  const auto r = partition_dbh(s, d, 8, seed, true, [&](EdgeIndex, const Edge&, PartitionId p) { seen.push_back(p); });
  const std::vector<VertexId> owner{1, 2, 3, 4, 1};
  for (std::size_t i = 0; i < owner.size(); ++i) {
    CHECK(r.assignment[i] == dbh_hash(owner[i], seed) % 8);
  }
  CHECK(seen == r.assignment);
  CHECK(r.edge_count == 5);
  CHECK(replicas_from_assignment(s, r.assignment, 8) == r.replicas);
  CHECK(partition_dbh(s, d, 8, seed).assignment == r.assignment);
  CHECK_THROWS_AS(partition_dbh(s, d, 0, seed), ConfigError);
  // Leaves are never replicated.
  for (VertexId v = 1; v < 5; ++v) {
    if (v != 1 && v != 2) CHECK(r.replicas.count(v) == 1);
  }
}

TEST_CASE("rf oracle on small graphs") {
  const std::vector<Edge> triangle{{0, 1}, {1, 2}, {2, 0}};
  CHECK(oracle_optimal_rf(triangle, 3).opt_value == doctest::Approx(1.0));
  RfOracleOptions capped;
  capped.tau = 1.0;
  // One edge per partition: every vertex sits in two partitions.
  CHECK(oracle_optimal_rf(triangle, 3, capped).opt_value == doctest::Approx(2.0));

  const std::vector<Edge> path{{0, 1}, {1, 2}};
  const auto r = oracle_optimal_rf(path, 2, capped);
  CHECK(r.opt_value == doctest::Approx(4.0 / 3.0));
  CHECK(r.arg.size() == 2);
  CHECK(r.arg[0] == 0);
  CHECK(r.ratio(2.0) == doctest::Approx(1.5));
}

TEST_CASE("rf oracle symmetry reduction does not change the optimum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Edge> edges;
    for (int i = 0; i < 7; ++i) {
      edges.push_back({static_cast<VertexId>(rng() % 6), static_cast<VertexId>(rng() % 6)});
    }
    RfOracleOptions full;
    full.fix_first = false;
    full.tau = 1.2;
    RfOracleOptions fixed;
    fixed.tau = 1.2;
    const auto a = oracle_optimal_rf(edges, 3, full);
    const auto b = oracle_optimal_rf(edges, 3, fixed);
    CHECK(a.opt_value == doctest::Approx(b.opt_value));
    CHECK(b.evaluated * 3 == a.evaluated);
  }
}

TEST_CASE("rf oracle guards") {
  std::vector<Edge> many(14, Edge{0, 1});
  CHECK_THROWS_AS(oracle_optimal_rf(many, 4), SizeGuardError);
  CHECK_THROWS_AS(oracle_optimal_rf({}, 2), DomainError);
  const std::vector<Edge> one{{0, 1}};
  CHECK_THROWS_AS(oracle_optimal_rf(one, 0), ConfigError);
}

TEST_CASE("welfare oracle") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = test::random_cluster_graph(rng, 7);
    const PartitionId k = 2 + trial % 2;
    const auto best = oracle_optimal_welfare(g, k);
    const auto unreduced = oracle_optimal_welfare(g, k, false);
    CHECK(best.opt_value == doctest::Approx(unreduced.opt_value));
    const double delta = compute_delta(g, k);
    CHECK(welfare_of_profile(g, k, delta, best.arg) == doctest::Approx(best.opt_value));

    const GameConfig cfg{k, 50, 1, 1, true};
    GameState s = init_game(g, cfg);
    run_game(s, cfg);
    const double eq = social_welfare(s);
    CHECK(eq >= best.opt_value - 1e-9);
    CHECK(best.ratio(eq) <= poa_bound(k));
  }
}

TEST_CASE("welfare oracle guards") {
  std::mt19937_64 rng(1);
  const auto big = test::random_cluster_graph(rng, 30);
  CHECK_THROWS_AS(oracle_optimal_welfare(big, 4), SizeGuardError);

  TempDir dir;
  RmatConfig r;
  r.scale = 4;
  r.edge_count = 20;
  const auto s = test::stream_of(dir, generate_rmat(r));
  const auto d = compute_degrees(s);
  const auto cfg = ClusteringConfig::standard(s.edge_count(), s.vertex_count(), 2);
  const auto state = cluster_stream(s, d, cfg);
  const auto sketched = ClusterGraph::build(s, state, d, cfg, ThetaMode::Sketch);
  CHECK_THROWS_AS(oracle_optimal_welfare(sketched, 2), ConfigError);
}
