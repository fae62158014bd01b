#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "s5p/cluster_graph.hpp"
#include "s5p/game.hpp"
#include "s5p/graph_io.hpp"
#include "s5p/metrics.hpp"
#include "s5p/postprocess.hpp"

namespace s5p {

enum class Algorithm { S5P, S5PBounded, DBH };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

struct RunConfig {
  Algorithm algorithm = Algorithm::S5P;
  PartitionId k = 2;
  double tau = 1.0;
  double beta = 1.0;
  double epsilon = 0.1;
  double nu = 0.01;
  std::size_t batch_size = 256;
  unsigned threads = 16;
  unsigned max_rounds = 50;
  std::uint64_t seed = 1;
  bool deterministic = false;
  ThetaMode theta = ThetaMode::Sketch;
  std::filesystem::path input;
  EdgeFormat input_format = EdgeFormat::Text;
  /// Keep the edge -> partition vector in memory.
  bool keep_assignment = true;
  bool persist_idmap = true;

  void validate() const;
};

struct StageTimings {
  double open_ms = 0.0;
  double degrees_ms = 0.0;
  double clustering_ms = 0.0;
  double cluster_graph_ms = 0.0;
  double game_ms = 0.0;
  double assign_ms = 0.0;
  double total_ms = 0.0;
};

struct RunResult {
  RunConfig config;
  std::uint64_t edge_count = 0;
  VertexId vertex_count = 0;
  PartitionResult partition;
  QualityReport report;
  std::optional<GameReport> game;
  ClusterId head_clusters = 0;
  ClusterId tail_clusters = 0;
  double delta = 0.0;
  StageTimings timings;
  /// Largest sum of live pipeline structures (degree table, id map, cluster
  /// tables, cluster graph, game state, replica table, assignment vector).
  std::uint64_t aux_memory_bytes = 0;
  SkewnessReport skew;
  std::uint64_t d_min = 0;
  std::uint64_t d_max = 0;
  double xi = 0.0;
};

/// Opens the input and runs one algorithm end to end. `sink`, when set,
/// sees every placement in stream order.
RunResult run_partitioner(const RunConfig& cfg, const EdgeSink& sink = {});

/// Same, over an already opened stream.
RunResult run_partitioner(const RunConfig& cfg, const EdgeStream& stream, const EdgeSink& sink = {});

/// Peak resident set size of this process in bytes.
std::uint64_t peak_rss_bytes();

/// rf, imbalance, loads, skewness, bounds, runtime_ms, peak_mem_bytes and
/// run details.
nlohmann::json metrics_json(const RunResult& result);

/// Metrics recomputed from an edge file and a partition file alone.
nlohmann::json metrics_from_files(const std::filesystem::path& edges, EdgeFormat edge_format,
                                  const std::filesystem::path& partition);

/// Skewness plus the bounds for the given k; bounds are null outside their domain.
nlohmann::json skew_and_bounds_json(const SkewnessReport& skew, PartitionId k, const DegreeTable& degrees,
                                    double xi, std::uint64_t vertex_count);

// Partition files. Text: one "u v p" line per edge with original ids, in
// stream order. Binary: "S5PP", u32 version, u64 |E|, u32 k, then one u32
// partition id per edge.
enum class PartitionFormat { Text, Binary };

PartitionFormat parse_partition_format(std::string_view name);

inline constexpr char kBinaryPartitionMagic[4] = {'S', '5', 'P', 'P'};
inline constexpr std::uint32_t kBinaryPartitionVersion = 1;

/// Writes placements as they arrive.
class PartitionWriter {
 public:
  PartitionWriter(const std::filesystem::path& path, PartitionFormat format, std::uint64_t edge_count,
                  PartitionId k, const EdgeStream& stream);
  ~PartitionWriter();
  PartitionWriter(const PartitionWriter&) = delete;
  PartitionWriter& operator=(const PartitionWriter&) = delete;

  void write(const Edge& e, PartitionId p);
  /// Flushes and checks that exactly edge_count records were written.
  void close();

 private:
  std::FILE* file_ = nullptr;
  PartitionFormat format_;
  std::uint64_t expected_ = 0;
  std::uint64_t written_ = 0;
  const EdgeStream* stream_;
  std::filesystem::path path_;
};

struct PartitionRecord {
  std::uint64_t u = 0;
  std::uint64_t v = 0;
  PartitionId p = 0;
};

struct PartitionFile {
  /// Text files carry endpoints; binary files only partition ids.
  bool has_endpoints = false;
  std::vector<PartitionRecord> records;
};

/// Reads either partition format (detected from the magic bytes).
PartitionFile read_partition_file(const std::filesystem::path& path);

}  // namespace s5p
