#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <string_view>

#include "s5p/count_min_sketch.hpp"
#include "s5p/error.hpp"

using namespace s5p;

namespace {

std::span<const std::byte> bytes(std::string_view s) { return std::as_bytes(std::span(s.data(), s.size())); }

}  // namespace

TEST_CASE("dimensions") {
  SketchConfig cfg;
  CHECK(cfg.width() == 28);
  CHECK(cfg.rows() == 5);
  CHECK(SketchConfig{0.01, 0.001, 1}.width() == 272);
  CHECK(SketchConfig{0.01, 0.001, 1}.rows() == 7);
  CHECK(SketchConfig{10.0, 0.9, 1}.width() == 1);
  CHECK(SketchConfig{10.0, 0.9, 1}.rows() == 1);
  CHECK_THROWS_AS(SketchConfig({0.0, 0.01, 1}).width(), ConfigError);
  CHECK_THROWS_AS(SketchConfig({0.1, 1.0, 1}).rows(), ConfigError);
  CountMinSketch s(cfg);
  CHECK(s.width() == 28);
  CHECK(s.rows() == 5);
}

TEST_CASE("string keys") {
  CountMinSketch s(SketchConfig{});
  CHECK(s.query(bytes("3|7")) == 0);
  s.insert(bytes("3|7"));
  CHECK(s.query(bytes("3|7")) >= 1);
  CHECK(s.total() == 1);
  s.insert(bytes("3|7"), 4);
  CHECK(s.query(bytes("3|7")) >= 5);
}

TEST_CASE("pair keys are unordered") {
  CountMinSketch s(SketchConfig{});
  s.insert_pair(9, 2, 3);
  CHECK(s.query_pair(2, 9) >= 3);
  CHECK(CountMinSketch::pair_key(2, 9) == CountMinSketch::pair_key(9, 2));
  const auto key = CountMinSketch::pair_key(1, 0x0102);
  CHECK(key[0] == std::byte{1});
  CHECK(key[8] == std::byte{0x02});
  CHECK(key[9] == std::byte{0x01});
}

TEST_CASE("same seed, same counters; queries never decrease") {
  CountMinSketch a(SketchConfig{0.1, 0.01, 42});
  CountMinSketch b(SketchConfig{0.1, 0.01, 42});
  std::mt19937_64 rng(3);
  std::uint64_t last = 0;
  for (int i = 0; i < 500; ++i) {
    const auto x = static_cast<ClusterId>(rng() % 50);
    const auto y = static_cast<ClusterId>(rng() % 50);
    a.insert_pair(x, y);
    b.insert_pair(x, y);
    const auto q = a.query_pair(1, 2);
    CHECK(q >= last);
    last = q;
  }
  for (ClusterId x = 0; x < 50; ++x) CHECK(a.query_pair(x, x + 1) == b.query_pair(x, x + 1));
}

TEST_CASE("error guarantee against an exact map") {
  // 1000 distinct keys, one insertion each: overestimates beyond eps * N
  // must be rare (nu = 1%).
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SketchConfig cfg{0.1, 0.01, seed};
    CountMinSketch s(cfg);
    std::map<std::pair<ClusterId, ClusterId>, std::uint64_t> exact;
    std::mt19937_64 rng(seed * 7919);
    while (exact.size() < 1000) {
      const auto a = static_cast<ClusterId>(rng() % 100000);
      const auto b = static_cast<ClusterId>(rng() % 100000);
      if (a == b || exact.count({std::min(a, b), std::max(a, b)})) continue;
      exact[{std::min(a, b), std::max(a, b)}] = 1;
      s.insert_pair(a, b);
    }
    const double bound = cfg.epsilon * static_cast<double>(s.total());
    int over = 0;
    for (const auto& [key, count] : exact) {
      const auto q = s.query_pair(key.first, key.second);
      CHECK(q >= count);
      if (static_cast<double>(q) > static_cast<double>(count) + bound) ++over;
    }
    CHECK(over <= 10);
  }
}
