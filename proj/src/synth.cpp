#include "s5p/synth.hpp"

#include <cmath>
#include <random>
#include <set>
#include <unordered_set>

#include "s5p/error.hpp"

namespace s5p {

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void RmatConfig::validate() const {
  if (scale == 0 || scale > 30) throw ConfigError("scale must be in [1, 30]");
  for (double p : {a, b, c, d}) {
    if (!(p >= 0.0)) throw ConfigError("quadrant probabilities must be non-negative");
  }
  if (std::abs(a + b + c + d - 1.0) > 1e-9) throw ConfigError("quadrant probabilities must sum to 1");
}

std::vector<RawEdge> generate_rmat(const RmatConfig& cfg) {
  cfg.validate();
  std::vector<RawEdge> edges(cfg.edge_count);
  const std::uint64_t chunks = (cfg.edge_count + kChunk - 1) / kChunk;
  const double ab = cfg.a + cfg.b;
  const double abc = ab + cfg.c;

#pragma omp parallel for schedule(static)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
    std::uint64_t state = cfg.seed ^ (static_cast<std::uint64_t>(ci) * 0xd1b54a32d192ed03ULL);
    std::mt19937_64 rng(splitmix64(state));
    const std::uint64_t begin = static_cast<std::uint64_t>(ci) * kChunk;
    const std::uint64_t end = std::min(cfg.edge_count, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      std::uint64_t u = 0;
      std::uint64_t v = 0;
      for (unsigned level = 0; level < cfg.scale; ++level) {
        const double r = unit(rng);
        u <<= 1;
        v <<= 1;
        if (r < cfg.a) {
        } else if (r < ab) {
          v |= 1;
        } else if (r < abc) {
          u |= 1;
        } else {
          u |= 1;
          v |= 1;
        }
      }
      edges[i] = {u, v};
    }
  }

  if (cfg.simple) {
    std::set<RawEdge> seen;
    std::vector<RawEdge> kept;
    for (const auto& [u, v] : edges) {
      if (u == v) continue;
      if (seen.insert({std::min(u, v), std::max(u, v)}).second) kept.emplace_back(u, v);
    }
    edges = std::move(kept);
  }
  return edges;
}

RmatSummary gen_rmat(const RmatConfig& cfg, const std::filesystem::path& out) {
  const auto edges = generate_rmat(cfg);
  write_text_edges(out, edges);
  std::unordered_set<std::uint64_t> touched;
  for (const auto& [u, v] : edges) {
    touched.insert(u);
    touched.insert(v);
  }
  return {touched.size(), edges.size(), cfg.seed};
}

}  // namespace s5p
