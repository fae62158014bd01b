#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "s5p/cluster_graph.hpp"
#include "s5p/clustering.hpp"
#include "s5p/error.hpp"
#include "s5p/game.hpp"
#include "s5p/metrics.hpp"
#include "s5p/pipeline.hpp"
#include "s5p/reference.hpp"
#include "s5p/synth.hpp"

namespace {

using nlohmann::json;

struct RunFlags {
  std::string algorithm = "s5p";
  std::string format = "text";
  std::string theta = "sketch";
  s5p::RunConfig cfg;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_algorithm) {
  cmd->add_option("-i,--input", f.cfg.input, "edge list")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", f.format, "edge list format")->check(CLI::IsMember({"text", "binary"}));
  if (with_algorithm) {
    cmd->add_option("-a,--algorithm", f.algorithm)->check(CLI::IsMember({"s5p", "s5p-b", "dbh"}));
  }
  cmd->add_option("-k,--k", f.cfg.k, "number of partitions")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--tau", f.cfg.tau, "imbalance threshold");
  cmd->add_option("--beta", f.cfg.beta, "head/tail threshold coefficient");
  cmd->add_option("--epsilon", f.cfg.epsilon, "sketch additive error");
  cmd->add_option("--nu", f.cfg.nu, "sketch failure probability");
  cmd->add_option("--batch-size", f.cfg.batch_size);
  cmd->add_option("--threads", f.cfg.threads);
  cmd->add_option("--max-rounds", f.cfg.max_rounds);
  cmd->add_option("--seed", f.cfg.seed);
  cmd->add_flag("--deterministic", f.cfg.deterministic, "one worker, batch size 1");
  cmd->add_option("--theta", f.theta, "inter-cluster counts")->check(CLI::IsMember({"sketch", "exact"}));
}

s5p::RunConfig resolve(RunFlags& f) {
  s5p::RunConfig cfg = f.cfg;
  cfg.algorithm = s5p::parse_algorithm(f.algorithm);
  cfg.input_format = s5p::parse_edge_format(f.format);
  cfg.theta = f.theta == "exact" ? s5p::ThetaMode::Exact : s5p::ThetaMode::Sketch;
  return cfg;
}

void emit_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw s5p::IoError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw s5p::IoError("cannot write " + path);
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("s5p");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("S5P_LOG")) {
    const std::string level = env;
    if (level == "error") spdlog::set_level(spdlog::level::err);
    else if (level == "info") spdlog::set_level(spdlog::level::info);
    else if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else spdlog::warn("ignoring S5P_LOG={} (expected error, info or debug)", level);
  }
}

std::vector<s5p::Edge> compact_edges(const s5p::EdgeStream& stream) {
  std::vector<s5p::Edge> edges;
  edges.reserve(stream.edge_count());
  stream.for_each([&](s5p::EdgeIndex, const s5p::Edge& e) { edges.push_back(e); });
  return edges;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"s5p: streaming vertex-cut graph partitioner"};
  app.require_subcommand(1);

  // partition
  RunFlags part;
  std::string part_out;
  std::string part_out_format = "text";
  std::string part_metrics;
  bool no_idmap = false;
  auto* partition = app.add_subcommand("partition", "partition an edge list");
  add_run_flags(partition, part, true);
  partition->add_option("-o,--output", part_out, "partition file");
  partition->add_option("--output-format", part_out_format)->check(CLI::IsMember({"text", "binary"}));
  partition->add_option("-m,--metrics", part_metrics, "metrics JSON path (default stdout)");
  partition->add_flag("--no-idmap", no_idmap, "do not write <input>.idmap");

  // metrics
  std::string met_edges;
  std::string met_format = "text";
  std::string met_partition;
  std::string met_out;
  auto* metrics = app.add_subcommand("metrics", "recompute metrics from an edge file and a partition file");
  metrics->add_option("-i,--input", met_edges, "edge list")->required()->check(CLI::ExistingFile);
  metrics->add_option("--format", met_format)->check(CLI::IsMember({"text", "binary"}));
  metrics->add_option("-p,--partition", met_partition, "partition file")->required()->check(CLI::ExistingFile);
  metrics->add_option("-o,--output", met_out, "JSON path (default stdout)");

  // gen-rmat
  s5p::RmatConfig rmat;
  std::string rmat_out;
  auto* gen = app.add_subcommand("gen-rmat", "generate an R-MAT edge list");
  gen->add_option("--scale", rmat.scale, "log2 of the vertex id range");
  gen->add_option("--edges", rmat.edge_count);
  gen->add_option("--a", rmat.a);
  gen->add_option("--b", rmat.b);
  gen->add_option("--c", rmat.c);
  gen->add_option("--d", rmat.d);
  gen->add_option("--seed", rmat.seed);
  gen->add_flag("--simple", rmat.simple, "drop self-loops and duplicate pairs");
  gen->add_option("-o,--output", rmat_out)->required();

  // oracle-rf
  std::string orf_input;
  std::string orf_format = "text";
  s5p::PartitionId orf_k = 2;
  std::optional<double> orf_tau;
  std::string orf_partition;
  auto* oracle_rf = app.add_subcommand("oracle-rf", "exhaustive minimum replication factor (tiny graphs)");
  oracle_rf->add_option("-i,--input", orf_input)->required()->check(CLI::ExistingFile);
  oracle_rf->add_option("--format", orf_format)->check(CLI::IsMember({"text", "binary"}));
  oracle_rf->add_option("-k,--k", orf_k)->required()->check(CLI::PositiveNumber);
  oracle_rf->add_option("--tau", orf_tau, "cap every partition at ceil(tau |E| / k) edges");
  oracle_rf->add_option("-p,--partition", orf_partition, "partition file to compare against the optimum");

  // oracle-welfare
  RunFlags ow;
  auto* oracle_welfare =
      app.add_subcommand("oracle-welfare", "exhaustive minimum social welfare of the cluster game (tiny graphs)");
  add_run_flags(oracle_welfare, ow, false);

  // compare
  RunFlags cmp;
  std::vector<std::string> cmp_algorithms{"s5p", "dbh"};
  std::string cmp_json;
  std::string cmp_degrees;
  auto* compare = app.add_subcommand("compare", "run several algorithms on one graph");
  add_run_flags(compare, cmp, false);
  compare->add_option("--algorithms", cmp_algorithms, "at least two of s5p, s5p-b, dbh")->delimiter(',');
  compare->add_option("--json", cmp_json, "write the comparison as JSON");
  compare->add_option("--degree-dump", cmp_degrees, "write per-degree mean replica counts (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*partition) {
      auto cfg = resolve(part);
      cfg.persist_idmap = !no_idmap;
      cfg.keep_assignment = false;
      const auto stream = s5p::EdgeStream::open(cfg.input, cfg.input_format, s5p::OpenOptions{cfg.persist_idmap});
      std::optional<s5p::PartitionWriter> writer;
      if (!part_out.empty()) {
        writer.emplace(part_out, s5p::parse_partition_format(part_out_format), stream.edge_count(), cfg.k, stream);
      }
      s5p::EdgeSink sink;
      if (writer) sink = [&](s5p::EdgeIndex, const s5p::Edge& e, s5p::PartitionId p) { writer->write(e, p); };
      const auto result = s5p::run_partitioner(cfg, stream, sink);
      if (writer) writer->close();
      emit_json(s5p::metrics_json(result), part_metrics);
    } else if (*metrics) {
      emit_json(s5p::metrics_from_files(met_edges, s5p::parse_edge_format(met_format), met_partition), met_out);
    } else if (*gen) {
      const auto summary = s5p::gen_rmat(rmat, rmat_out);
      emit_json({{"vertices_touched", summary.vertices_touched},
                 {"edge_count", summary.edge_count},
                 {"seed", summary.seed},
                 {"output", rmat_out}},
                "");
    } else if (*oracle_rf) {
      const auto stream =
          s5p::EdgeStream::open(orf_input, s5p::parse_edge_format(orf_format), s5p::OpenOptions{false});
      const auto edges = compact_edges(stream);
      s5p::RfOracleOptions options;
      options.tau = orf_tau;
      const auto best = s5p::oracle_optimal_rf(edges, orf_k, options);
      json j{{"opt_rf", best.opt_value}, {"assignments_evaluated", best.evaluated}, {"arg", best.arg}};
      if (!orf_partition.empty()) {
        const auto m = s5p::metrics_from_files(orf_input, s5p::parse_edge_format(orf_format), orf_partition);
        j["partition_rf"] = m["rf"];
        j["ratio"] = best.ratio(m["rf"].get<double>());
      }
      emit_json(j, "");
    } else if (*oracle_welfare) {
      auto cfg = resolve(ow);
      const auto stream = s5p::EdgeStream::open(cfg.input, cfg.input_format, s5p::OpenOptions{false});
      const auto degrees = s5p::compute_degrees(stream);
      const auto clustering =
          s5p::ClusteringConfig::standard(stream.edge_count(), stream.vertex_count(), cfg.k, cfg.beta);
      const auto state = s5p::cluster_stream(stream, degrees, clustering);
      const auto graph =
          s5p::ClusterGraph::build(stream, state, degrees, clustering, s5p::ThetaMode::Exact);
      const auto best = s5p::oracle_optimal_welfare(graph, cfg.k);
      s5p::GameConfig game_cfg{cfg.k, cfg.max_rounds, cfg.batch_size, cfg.threads, cfg.deterministic};
      auto game = s5p::init_game(graph, game_cfg);
      const auto report = s5p::run_game(game, game_cfg);
      const double s = s5p::social_welfare(game);
      emit_json({{"clusters", graph.cluster_count()},
                 {"opt_welfare", best.opt_value},
                 {"arg", best.arg},
                 {"equilibrium_welfare", s},
                 {"converged", report.converged},
                 {"rounds", report.rounds},
                 {"ratio", best.ratio(s)},
                 {"poa_bound", s5p::poa_bound(cfg.k)}},
                "");
    } else if (*compare) {
      if (cmp_algorithms.size() < 2) throw s5p::ConfigError("compare needs at least two algorithms");
      auto base = resolve(cmp);
      base.persist_idmap = false;
      const auto stream = s5p::EdgeStream::open(base.input, base.input_format, s5p::OpenOptions{false});
      const auto degrees = s5p::compute_degrees(stream);
      json rows = json::array();
      json degree_rows = json::object();
      std::ostringstream table;
      table << std::left << std::setw(8) << "algo" << std::right << std::setw(12) << "rf" << std::setw(12)
            << "imbalance" << std::setw(14) << "runtime_ms" << std::setw(16) << "peak_mem_bytes" << "\n";
      for (const auto& name : cmp_algorithms) {
        auto cfg = base;
        cfg.algorithm = s5p::parse_algorithm(name);
        const auto result = s5p::run_partitioner(cfg, stream);
        auto j = s5p::metrics_json(result);
        rows.push_back(j);
        table << std::left << std::setw(8) << name << std::right << std::fixed << std::setprecision(4)
              << std::setw(12) << result.report.rf << std::setw(12) << result.report.imbalance
              << std::setprecision(1) << std::setw(14) << result.report.runtime_ms << std::setw(16)
              << result.report.peak_mem_bytes << "\n";
        if (!cmp_degrees.empty()) {
          json buckets = json::array();
          for (const auto& b : s5p::degree_resolved_rf(result.partition, degrees).buckets) {
            buckets.push_back({{"degree", b.degree}, {"frequency", b.frequency}, {"g", b.mean_replicas}});
          }
          degree_rows[name] = buckets;
        }
      }
      std::cout << table.str();
      if (!cmp_json.empty()) emit_json({{"runs", rows}}, cmp_json);
      if (!cmp_degrees.empty()) emit_json(degree_rows, cmp_degrees);
    }
  } catch (const s5p::ConfigError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
