#include "s5p/pipeline.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

#include <spdlog/spdlog.h>

#include "s5p/clustering.hpp"
#include "s5p/error.hpp"
#include "s5p/reference.hpp"

namespace s5p {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t game_state_bytes(const GameState& s) {
  return s.c2p.capacity() * sizeof(PartitionId) + s.part_size.capacity() * sizeof(std::int64_t);
}

void put_le(std::FILE* f, std::uint64_t value, int bytes) {
  unsigned char buf[8];
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
  if (std::fwrite(buf, 1, static_cast<std::size_t>(bytes), f) != static_cast<std::size_t>(bytes)) {
    throw IoError("short write to partition file");
  }
}

std::uint64_t get_le(std::FILE* f, int bytes, const std::filesystem::path& path) {
  unsigned char buf[8];
  if (std::fread(buf, 1, static_cast<std::size_t>(bytes), f) != static_cast<std::size_t>(bytes)) {
    throw ParseError("truncated binary partition file " + path.string(), 0);
  }
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) value |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return value;
}

nlohmann::json double_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "s5p") return Algorithm::S5P;
  if (name == "s5p-b") return Algorithm::S5PBounded;
  if (name == "dbh") return Algorithm::DBH;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected s5p, s5p-b or dbh)");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::S5P: return "s5p";
    case Algorithm::S5PBounded: return "s5p-b";
    case Algorithm::DBH: return "dbh";
  }
  return "?";
}

void RunConfig::validate() const {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (!(tau >= 1.0)) throw ConfigError("tau must be at least 1");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("nu must be in (0, 1)");
  if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (max_rounds == 0) throw ConfigError("max_rounds must be at least 1");
}

std::uint64_t peak_rss_bytes() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;
}

RunResult run_partitioner(const RunConfig& cfg, const EdgeSink& sink) {
  cfg.validate();
  const auto start = Clock::now();
  const auto stream = EdgeStream::open(cfg.input, cfg.input_format, OpenOptions{cfg.persist_idmap});
  const double open_ms = ms_since(start);
  spdlog::info("opened {} ({} edges, {} vertices) in {:.1f} ms", cfg.input.string(), stream.edge_count(),
               stream.vertex_count(), open_ms);
  RunResult result = run_partitioner(cfg, stream, sink);
  result.timings.open_ms = open_ms;
  result.timings.total_ms += open_ms;
  result.report.runtime_ms = result.timings.total_ms;
  return result;
}

RunResult run_partitioner(const RunConfig& cfg, const EdgeStream& stream, const EdgeSink& sink) {
  cfg.validate();
  RunResult out;
  out.config = cfg;
  out.edge_count = stream.edge_count();
  out.vertex_count = stream.vertex_count();
  const auto start = Clock::now();
  std::uint64_t live = stream.id_map().memory_bytes();
  auto track = [&](std::uint64_t bytes) { out.aux_memory_bytes = std::max(out.aux_memory_bytes, bytes); };

  auto t = Clock::now();
  const DegreeTable degrees = compute_degrees(stream);
  out.timings.degrees_ms = ms_since(t);
  out.d_min = degrees.d_min;
  out.d_max = degrees.d_max;
  live += degrees.memory_bytes();
  track(live);
  spdlog::info("degree pass: {:.1f} ms", out.timings.degrees_ms);

  if (cfg.algorithm == Algorithm::DBH) {
    out.xi = degree_threshold(stream.edge_count(), stream.vertex_count(), cfg.beta);
    t = Clock::now();
    out.partition = partition_dbh(stream, degrees, cfg.k, cfg.seed, cfg.keep_assignment, sink);
    out.timings.assign_ms = ms_since(t);
    track(live + out.partition.memory_bytes());
    spdlog::info("dbh pass: {:.1f} ms", out.timings.assign_ms);
  } else {
    const bool bounded = cfg.algorithm == Algorithm::S5PBounded;
    const auto clustering =
        ClusteringConfig::standard(stream.edge_count(), stream.vertex_count(), cfg.k, cfg.beta, bounded);
    out.xi = clustering.xi;

    t = Clock::now();
    const ClusterState state = cluster_stream(stream, degrees, clustering);
    out.timings.clustering_ms = ms_since(t);
    live += state.memory_bytes();
    track(live);
    out.head_clusters = state.head_count();
    out.tail_clusters = state.tail_count();
    spdlog::info("clustering pass: {:.1f} ms ({} head, {} tail clusters)", out.timings.clustering_ms,
                 out.head_clusters, out.tail_clusters);

    std::vector<PartitionId> c2p;
    {
      t = Clock::now();
      SketchConfig sketch{cfg.epsilon, cfg.nu, cfg.seed};
      const ClusterGraph graph = ClusterGraph::build(stream, state, degrees, clustering, cfg.theta, sketch);
      out.timings.cluster_graph_ms = ms_since(t);
      spdlog::info("cluster graph pass: {:.1f} ms", out.timings.cluster_graph_ms);

      t = Clock::now();
      GameConfig game_cfg{cfg.k, cfg.max_rounds, cfg.batch_size, cfg.threads, cfg.deterministic};
      GameState game = init_game(graph, game_cfg);
      track(live + graph.memory_bytes() + game_state_bytes(game));
      out.delta = game.delta;
      out.game = run_game(game, game_cfg);
      out.timings.game_ms = ms_since(t);
      spdlog::info("game: {} rounds, {} moves, converged={}, {:.1f} ms", out.game->rounds, out.game->moves,
                   out.game->converged, out.timings.game_ms);
      c2p = std::move(game.c2p);
    }

    t = Clock::now();
    PostprocessConfig post{cfg.tau, bounded, cfg.keep_assignment};
    out.partition = assign_edges(stream, degrees, clustering, state, c2p, cfg.k, post, sink);
    out.timings.assign_ms = ms_since(t);
    track(live + c2p.capacity() * sizeof(PartitionId) + out.partition.memory_bytes());
    spdlog::info("assignment pass: {:.1f} ms", out.timings.assign_ms);
  }

  out.timings.total_ms = ms_since(start);
  out.report.rf = replication_factor(out.partition);
  out.report.imbalance = imbalance(out.partition);
  out.report.loads = out.partition.load;
  out.report.runtime_ms = out.timings.total_ms;
  out.report.peak_mem_bytes = peak_rss_bytes();
  out.skew = skewness(degrees, stream.vertex_count(), stream.edge_count());
  return out;
}

nlohmann::json skew_and_bounds_json(const SkewnessReport& skew, PartitionId k, const DegreeTable& degrees,
                                    double xi, std::uint64_t vertex_count) {
  nlohmann::json j;
  j["skewness"] = {{"rho", double_or_null(skew.rho)}, {"rho1", skew.rho1},   {"rho2", skew.rho2},
                   {"rho3", skew.rho3},               {"mean", skew.mean},   {"mode", skew.mode},
                   {"median", skew.median},           {"sigma", skew.sigma}, {"zero_variance", skew.zero_variance}};
  nlohmann::json bounds;
  bounds["poa_bound"] = poa_bound(std::max<PartitionId>(k, 1));
  bounds["rf_bound"] = nullptr;
  bounds["rd_bound"] = nullptr;
  try {
    const auto in = make_bound_inputs(skew.rho, k, static_cast<double>(degrees.d_min),
                                      static_cast<double>(degrees.d_max), xi, static_cast<double>(vertex_count));
    bounds["rf_bound"] = double_or_null(rf_bound(in));
    bounds["rd_bound"] = double_or_null(rd_bound(in));
  } catch (const DomainError&) {
  }
  j["bounds"] = bounds;
  return j;
}

nlohmann::json metrics_json(const RunResult& r) {
  DegreeTable degrees;
  degrees.d_min = r.d_min;
  degrees.d_max = r.d_max;
  nlohmann::json j;
  j["algorithm"] = to_string(r.config.algorithm);
  j["k"] = r.config.k;
  j["edge_count"] = r.edge_count;
  j["vertex_count"] = r.vertex_count;
  j["rf"] = r.report.rf;
  j["imbalance"] = r.report.imbalance;
  j["loads"] = r.report.loads;
  j.update(skew_and_bounds_json(r.skew, r.config.k, degrees, r.xi, r.vertex_count));
  j["runtime_ms"] = r.report.runtime_ms;
  j["peak_mem_bytes"] = r.report.peak_mem_bytes;
  j["aux_mem_bytes"] = r.aux_memory_bytes;
  j["timings_ms"] = {{"open", r.timings.open_ms},
                     {"degrees", r.timings.degrees_ms},
                     {"clustering", r.timings.clustering_ms},
                     {"cluster_graph", r.timings.cluster_graph_ms},
                     {"game", r.timings.game_ms},
                     {"assign", r.timings.assign_ms}};
  j["config"] = {{"tau", r.config.tau},
                 {"beta", r.config.beta},
                 {"epsilon", r.config.epsilon},
                 {"nu", r.config.nu},
                 {"batch_size", r.config.batch_size},
                 {"threads", r.config.threads},
                 {"max_rounds", r.config.max_rounds},
                 {"seed", r.config.seed},
                 {"deterministic", r.config.deterministic},
                 {"theta", r.config.theta == ThetaMode::Exact ? "exact" : "sketch"}};
  if (r.game) {
    j["game"] = {{"rounds", r.game->rounds},
                 {"moves", r.game->moves},
                 {"converged", r.game->converged},
                 {"delta", r.delta},
                 {"head_clusters", r.head_clusters},
                 {"tail_clusters", r.tail_clusters}};
  }
  return j;
}

PartitionFormat parse_partition_format(std::string_view name) {
  if (name == "text") return PartitionFormat::Text;
  if (name == "binary") return PartitionFormat::Binary;
  throw ConfigError("unknown partition format '" + std::string(name) + "' (expected text or binary)");
}

PartitionWriter::PartitionWriter(const std::filesystem::path& path, PartitionFormat format,
                                 std::uint64_t edge_count, PartitionId k, const EdgeStream& stream)
    : format_(format), expected_(edge_count), stream_(&stream), path_(path) {
  file_ = std::fopen(path.string().c_str(), "wb");
  if (file_ == nullptr) throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  if (format_ == PartitionFormat::Binary) {
    if (std::fwrite(kBinaryPartitionMagic, 1, 4, file_) != 4) throw IoError("short write to " + path.string());
    put_le(file_, kBinaryPartitionVersion, 4);
    put_le(file_, edge_count, 8);
    put_le(file_, k, 4);
  }
}

PartitionWriter::~PartitionWriter() {
  if (file_ != nullptr) std::fclose(file_);
}

void PartitionWriter::write(const Edge& e, PartitionId p) {
  if (format_ == PartitionFormat::Binary) {
    put_le(file_, p, 4);
  } else if (std::fprintf(file_, "%llu %llu %u\n", static_cast<unsigned long long>(stream_->original_id(e.u)),
                          static_cast<unsigned long long>(stream_->original_id(e.v)), p) < 0) {
    throw IoError("short write to " + path_.string());
  }
  ++written_;
}

void PartitionWriter::close() {
  if (file_ == nullptr) return;
  const bool ok = std::fclose(file_) == 0;
  file_ = nullptr;
  if (!ok) throw IoError("cannot flush " + path_.string());
  if (written_ != expected_) {
    throw ConsistencyError("wrote " + std::to_string(written_) + " partition records, expected " +
                           std::to_string(expected_));
  }
}

PartitionFile read_partition_file(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "rb");
  if (f == nullptr) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> guard(f, &std::fclose);

  char magic[4] = {};
  const std::size_t got = std::fread(magic, 1, 4, f);
  PartitionFile file;
  auto& out = file.records;
  if (got == 4 && std::memcmp(magic, kBinaryPartitionMagic, 4) == 0) {
    const auto version = get_le(f, 4, path);
    if (version != kBinaryPartitionVersion) {
      throw ParseError("unsupported partition file version " + std::to_string(version), 0);
    }
    const auto count = get_le(f, 8, path);
    const auto k = get_le(f, 4, path);
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto p = static_cast<PartitionId>(get_le(f, 4, path));
      if (p >= k) throw ParseError("partition id " + std::to_string(p) + " >= k", 0);
      out.push_back({0, 0, p});
    }
    if (std::fgetc(f) != EOF) throw ParseError("trailing bytes after " + std::to_string(count) + " records", 0);
    return file;
  }

  std::rewind(f);
  char line[256];
  std::uint64_t line_no = 0;
  while (std::fgets(line, sizeof line, f) != nullptr) {
    ++line_no;
    if (line[0] == '#' || line[0] == '\n' || line[0] == '\0') continue;
    unsigned long long u = 0;
    unsigned long long v = 0;
    unsigned p = 0;
    char extra = 0;
    if (std::sscanf(line, "%llu %llu %u %c", &u, &v, &p, &extra) != 3) {
      throw ParseError("malformed partition record", line_no);
    }
    out.push_back({u, v, p});
  }
  file.has_endpoints = true;
  return file;
}

nlohmann::json metrics_from_files(const std::filesystem::path& edges, EdgeFormat edge_format,
                                  const std::filesystem::path& partition) {
  const auto stream = EdgeStream::open(edges, edge_format, OpenOptions{false});
  const auto file = read_partition_file(partition);
  const auto& records = file.records;
  if (records.size() != stream.edge_count()) {
    throw ConsistencyError("partition file has " + std::to_string(records.size()) + " records but the edge file has " +
                           std::to_string(stream.edge_count()) + " edges");
  }
  std::vector<PartitionId> assignment(records.size());
  PartitionId max_id = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    assignment[i] = records[i].p;
    max_id = std::max(max_id, records[i].p);
  }
  const PartitionId k = max_id + 1;
  if (file.has_endpoints) {
    stream.for_each([&](EdgeIndex i, const Edge& e) {
      if (records[i].u != stream.original_id(e.u) || records[i].v != stream.original_id(e.v)) {
        throw ConsistencyError("partition record " + std::to_string(i) + " does not match the edge file");
      }
    });
  }

  PartitionResult result;
  result.k = k;
  result.edge_count = stream.edge_count();
  result.load.assign(k, 0);
  for (auto p : assignment) ++result.load[p];
  result.replicas = replicas_from_assignment(stream, assignment, k);

  const DegreeTable degrees = compute_degrees(stream);
  const auto skew = skewness(degrees, stream.vertex_count(), stream.edge_count());
  const double xi = degree_threshold(stream.edge_count(), stream.vertex_count(), 1.0);

  nlohmann::json j;
  j["k"] = k;
  j["edge_count"] = stream.edge_count();
  j["vertex_count"] = stream.vertex_count();
  j["rf"] = replication_factor(result);
  j["imbalance"] = imbalance(result);
  j["loads"] = result.load;
  j.update(skew_and_bounds_json(skew, k, degrees, xi, stream.vertex_count()));
  return j;
}

}  // namespace s5p
