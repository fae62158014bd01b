#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "s5p/graph_io.hpp"

namespace s5p {

struct RmatConfig {
  /// log2 of the vertex id range.
  unsigned scale = 10;
  std::uint64_t edge_count = 1024;
  double a = 0.25;
  double b = 0.25;
  double c = 0.25;
  double d = 0.25;
  std::uint64_t seed = 1;
  /// Drop self-loops and repeated pairs (either orientation). The output then
  /// holds at most edge_count edges.
  bool simple = false;

  /// Throws ConfigError on bad probabilities or scale > 30.
  void validate() const;
};

struct RmatSummary {
  std::uint64_t vertices_touched = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t seed = 0;
};

/// Classic recursive-matrix generator: each edge descends `scale` levels,
/// picking a quadrant per level. Generated in fixed-size chunks with seeds
/// derived from cfg.seed, so output is independent of thread count.
std::vector<RawEdge> generate_rmat(const RmatConfig& cfg);

/// Generates and writes a text edge list.
RmatSummary gen_rmat(const RmatConfig& cfg, const std::filesystem::path& out);

}  // namespace s5p
