#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "s5p/clustering.hpp"
#include "s5p/error.hpp"
#include "s5p/synth.hpp"
#include "test_util.hpp"

using namespace s5p;
using s5p::test::TempDir;

namespace {

DegreeTable degrees_of(std::vector<std::uint64_t> d) {
  DegreeTable t;
  t.degree = std::move(d);
  return t;
}

ClusteringConfig with_kappa(double kappa, bool bounded = false) {
  ClusteringConfig cfg;
  cfg.kappa = kappa;
  cfg.bounded = bounded;
  return cfg;
}

}  // namespace

TEST_CASE("standard configuration") {
  const auto cfg = ClusteringConfig::standard(14, 12, 3);
  CHECK(cfg.kappa == doctest::Approx(28.0 / 3.0));
  CHECK(cfg.xi == doctest::Approx(28.0 / 12.0));
  CHECK_FALSE(cfg.bounded);
  CHECK_THROWS_AS(ClusteringConfig::standard(14, 12, 0), ConfigError);
}

TEST_CASE("head edge over the cap allocates but does not migrate") {
  ClusterState s(2);
  const auto d = degrees_of({5, 6});
  head_edge_step(0, 1, s, d, with_kappa(28.0 / 3.0));
  CHECK(s.head_count() == 2);
  CHECK(s.head_vol == std::vector<std::int64_t>{5, 6});
  CHECK(s.head_of[0] != s.head_of[1]);
}

TEST_CASE("head migration picks the smaller stake, lower id on ties") {
  // u=0 sits in a cluster of volume 3 with d(u)=2, v=1 in one of volume 4 with d(v)=3.
  ClusterState s(4);
  s.head_of = {0, 1, 0, 1};
  s.head_vol = {3, 4};
  const auto d = degrees_of({2, 3, 1, 1});
  head_edge_step(0, 1, s, d, with_kappa(100));
  CHECK(s.head_of[0] == 1);
  CHECK(s.head_vol == std::vector<std::int64_t>{1, 6});
}

TEST_CASE("head migration needs the destination to stay strictly below the cap") {
  ClusterState s(3);
  s.head_of = {0, 1, 1};
  s.head_vol = {2, 5};
  const auto d = degrees_of({2, 3, 2});
  // i = 0 (stake 0), vol(j) + d(i) = 5 + 2 = 7 = kappa.
  head_edge_step(0, 1, s, d, with_kappa(7));
  CHECK(s.head_of[0] == 0);
  head_edge_step(0, 1, s, d, with_kappa(7.5));
  CHECK(s.head_of[0] == 1);
  CHECK(s.head_vol == std::vector<std::int64_t>{0, 7});
}

TEST_CASE("co-clustered head endpoints are left alone") {
  ClusterState s(2);
  s.head_of = {0, 0};
  s.head_vol = {7};
  head_edge_step(0, 1, s, degrees_of({3, 4}), with_kappa(100));
  CHECK(s.head_vol == std::vector<std::int64_t>{7});
}

TEST_CASE("single tail edge merges into one cluster of volume 2") {
  ClusterState s(2);
  tail_edge_step(0, 1, s, degrees_of({1, 1}), with_kappa(28.0 / 3.0));
  CHECK(s.tail_of[0] == s.tail_of[1]);
  CHECK(s.tail_vol[s.tail_of[0]] == 2);
  CHECK(s.ld == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("tail cluster at the cap blocks migration") {
  ClusterState s(3);
  s.tail_of = {0, 1, 1};
  s.tail_vol = {0, 9};
  s.ld = {0, 4, 5};
  // After the +1 updates the v side reaches 10 = kappa.
  tail_edge_step(0, 1, s, degrees_of({1, 5, 5}), with_kappa(10));
  CHECK(s.tail_of[0] == 0);
  CHECK(s.tail_vol == std::vector<std::int64_t>{1, 10});
}

TEST_CASE("bounded mode ignores the cap and uses global degrees") {
  ClusterState s(3);
  s.tail_of = {0, 1, 1};
  s.tail_vol = {1000, 2000};
  s.ld = {1, 1, 1};
  tail_edge_step(0, 1, s, degrees_of({3, 5, 5}), with_kappa(1, true));
  CHECK(s.tail_of[0] == 1);
  CHECK(s.tail_vol == std::vector<std::int64_t>{997, 2003});

  ClusterState fresh(2);
  tail_edge_step(0, 1, fresh, degrees_of({4, 2}), with_kappa(0, true));
  // v (volume 2) joins u's cluster carrying its degree.
  CHECK(fresh.tail_of[1] == fresh.tail_of[0]);
  CHECK(fresh.tail_vol[fresh.tail_of[0]] == 6);

  ClusterState heads(2);
  head_edge_step(0, 1, heads, degrees_of({50, 60}), with_kappa(1, true));
  CHECK(heads.head_of[0] == heads.head_of[1]);
}

TEST_CASE("stream pass invariants on random graphs") {
  TempDir dir;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RmatConfig r;
    r.scale = 9;
    r.edge_count = 3000;
    r.a = 0.57;
    r.b = r.c = 0.19;
    r.d = 0.05;
    r.seed = seed;
    const auto s = test::stream_of(dir, generate_rmat(r));
    const auto d = compute_degrees(s);
    const auto cfg = ClusteringConfig::standard(s.edge_count(), s.vertex_count(), 8);
    const auto state = cluster_stream(s, d, cfg);
    CHECK(state == cluster_stream(s, d, cfg));

    std::int64_t head_mass = 0;
    std::int64_t tail_edges = 0;
    std::vector<bool> in_head(s.vertex_count(), false);
    s.for_each([&](EdgeIndex, const Edge& e) {
      if (classify_edge(e, d, cfg.xi) == EdgeKind::Head) {
        for (VertexId x : {e.u, e.v}) {
          CHECK(state.head_of[x] != kNoCluster);
          if (!in_head[x]) head_mass += static_cast<std::int64_t>(d[x]);
          in_head[x] = true;
        }
      } else {
        ++tail_edges;
        CHECK(state.tail_of[e.u] != kNoCluster);
        CHECK(state.tail_of[e.v] != kNoCluster);
      }
    });
    std::int64_t head_sum = 0;
    for (auto v : state.head_vol) {
      CHECK(v >= 0);
      head_sum += v;
    }
    std::int64_t tail_sum = 0;
    for (auto v : state.tail_vol) {
      CHECK(v >= 0);
      tail_sum += v;
    }
    CHECK(head_sum == head_mass);
    CHECK(tail_sum == 2 * tail_edges);
  }
}

TEST_CASE("head migrations never push a destination to the cap") {
  std::mt19937_64 rng(7);
  const VertexId n = 40;
  std::vector<std::uint64_t> deg(n);
  for (auto& x : deg) x = std::uniform_int_distribution<std::uint64_t>(1, 12)(rng);
  const auto d = degrees_of(deg);
  const auto cfg = with_kappa(30);
  ClusterState s(n);
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  for (int step = 0; step < 2000; ++step) {
    const VertexId u = pick(rng);
    const VertexId v = pick(rng);
    const auto before = s.head_of;
    head_edge_step(u, v, s, d, cfg);
    for (VertexId x : {u, v}) {
      if (before[x] != kNoCluster && before[x] != s.head_of[x]) {
        CHECK(static_cast<double>(s.head_vol[s.head_of[x]]) < cfg.kappa);
      }
    }
  }
}

TEST_CASE("cluster ids are handed out in allocation order") {
  ClusterState s(4);
  const auto d = degrees_of({50, 50, 50, 50});
  head_edge_step(2, 3, s, d, with_kappa(60));
  CHECK(s.head_of[2] == 0);
  CHECK(s.head_of[3] == 1);
  head_edge_step(0, 1, s, d, with_kappa(60));
  CHECK(s.head_of[0] == 2);
  CHECK(s.head_of[1] == 3);
}

TEST_CASE("cluster dump") {
  TempDir dir;
  const auto s = test::stream_of(dir, {{10, 11}});
  ClusterState state(2);
  state.tail_of = {0, 0};
  state.tail_vol = {2};
  write_cluster_dump(dir / "c.txt", s, state);
  CHECK(test::read_file(dir / "c.txt") == "10 -1 0\n11 -1 0\n");
}
