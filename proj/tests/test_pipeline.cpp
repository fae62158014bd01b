#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "s5p/error.hpp"
#include "s5p/pipeline.hpp"
#include "s5p/synth.hpp"
#include "test_util.hpp"

using namespace s5p;
using s5p::test::TempDir;

namespace {

std::filesystem::path rmat_file(const TempDir& dir, std::uint64_t seed = 1) {
  RmatConfig r;
  r.scale = 10;
  r.edge_count = 1 << 13;
  r.a = 0.57;
  r.b = 0.19;
  r.c = 0.19;
  r.d = 0.05;
  r.seed = seed;
  gen_rmat(r, dir / "g.txt");
  return dir / "g.txt";
}

RunConfig config_for(const std::filesystem::path& input, Algorithm a, PartitionId k) {
  RunConfig cfg;
  cfg.input = input;
  cfg.algorithm = a;
  cfg.k = k;
  cfg.persist_idmap = false;
  cfg.deterministic = true;
  return cfg;
}

void write_partition(const RunConfig& cfg, const std::filesystem::path& out, PartitionFormat fmt) {
  const auto stream = EdgeStream::open(cfg.input, cfg.input_format, OpenOptions{false});
  PartitionWriter writer(out, fmt, stream.edge_count(), cfg.k, stream);
  run_partitioner(cfg, stream, [&](EdgeIndex, const Edge& e, PartitionId p) { writer.write(e, p); });
  writer.close();
}

}  // namespace

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("s5p") == Algorithm::S5P);
  CHECK(parse_algorithm("s5p-b") == Algorithm::S5PBounded);
  CHECK(parse_algorithm("dbh") == Algorithm::DBH);
  CHECK(to_string(Algorithm::S5PBounded) == "s5p-b");
  CHECK_THROWS_AS(parse_algorithm("hdrf"), ConfigError);
  CHECK_THROWS_AS(parse_partition_format("csv"), ConfigError);
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.k = 2;
  cfg.tau = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tau = 1.0;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("a single partition replicates nothing") {
  TempDir dir;
  test::write_file(dir / "t.txt", "0 1\n1 2\n2 0\n");
  for (auto a : {Algorithm::S5P, Algorithm::S5PBounded, Algorithm::DBH}) {
    const auto r = run_partitioner(config_for(dir / "t.txt", a, 1));
    const auto j = metrics_json(r);
    CHECK(j["rf"].get<double>() == doctest::Approx(1.0));
    CHECK(j["imbalance"].get<double>() == doctest::Approx(1.0));
    CHECK(j["loads"] == nlohmann::json::array({3}));
  }
}

TEST_CASE("every algorithm places every edge") {
  TempDir dir;
  const auto path = rmat_file(dir);
  for (auto a : {Algorithm::S5P, Algorithm::S5PBounded, Algorithm::DBH}) {
    const auto r = run_partitioner(config_for(path, a, 8));
    std::uint64_t sum = 0;
    for (auto l : r.report.loads) sum += l;
    CHECK(sum == r.edge_count);
    CHECK(r.partition.assignment.size() == r.edge_count);
    CHECK(r.report.rf >= 1.0);
    CHECK(r.report.rf <= 8.0);
    if (a == Algorithm::S5P) CHECK(r.report.imbalance <= 1.0 + 8.0 / static_cast<double>(r.edge_count));
    CHECK((a == Algorithm::DBH) == !r.game.has_value());
  }
}

TEST_CASE("metrics json fields") {
  TempDir dir;
  const auto r = run_partitioner(config_for(rmat_file(dir), Algorithm::S5P, 4));
  const auto j = metrics_json(r);
  for (const char* key : {"rf", "imbalance", "loads", "skewness", "bounds", "runtime_ms", "peak_mem_bytes",
                          "aux_mem_bytes", "timings_ms", "config", "game"}) {
    CHECK_MESSAGE(j.contains(key), key);
  }
  CHECK(j["bounds"]["poa_bound"].get<double>() == doctest::Approx(5.0));
  CHECK(j["skewness"]["rho3"].get<std::int64_t>() == r.skew.rho3);
}

TEST_CASE("deterministic runs write identical partition files") {
  TempDir dir;
  const auto path = rmat_file(dir, 7);
  for (auto fmt : {PartitionFormat::Text, PartitionFormat::Binary}) {
    auto cfg = config_for(path, Algorithm::S5P, 8);
    cfg.threads = 1;
    write_partition(cfg, dir / "a.part", fmt);
    cfg.threads = 8;
    write_partition(cfg, dir / "b.part", fmt);
    CHECK(test::read_file(dir / "a.part") == test::read_file(dir / "b.part"));
  }
}

TEST_CASE("metrics recomputed from files match the run") {
  TempDir dir;
  const auto path = rmat_file(dir, 3);
  const auto cfg = config_for(path, Algorithm::S5P, 8);
  const auto r = run_partitioner(cfg);
  for (auto fmt : {PartitionFormat::Text, PartitionFormat::Binary}) {
    write_partition(cfg, dir / "p.part", fmt);
    const auto j = metrics_from_files(path, EdgeFormat::Text, dir / "p.part");
    CHECK(j["rf"].get<double>() == doctest::Approx(r.report.rf).epsilon(1e-12));
    CHECK(j["imbalance"].get<double>() == doctest::Approx(r.report.imbalance).epsilon(1e-12));
    CHECK(j["k"].get<PartitionId>() <= 8);
  }
}

TEST_CASE("partition files that do not match the edges are rejected") {
  TempDir dir;
  const auto path = rmat_file(dir, 2);
  const auto cfg = config_for(path, Algorithm::DBH, 4);
  write_partition(cfg, dir / "p.txt", PartitionFormat::Text);
  auto text = test::read_file(dir / "p.txt");

  // Drop the last record.
  const auto cut = text.rfind('\n', text.size() - 2);
  test::write_file(dir / "short.txt", text.substr(0, cut + 1));
  CHECK_THROWS_AS(metrics_from_files(path, EdgeFormat::Text, dir / "short.txt"), ConsistencyError);

  // Swap the first two records: counts agree, endpoints do not.
  const auto first = text.find('\n');
  const auto second = text.find('\n', first + 1);
  const std::string swapped = text.substr(first + 1, second - first) + text.substr(0, first + 1) + text.substr(second + 1);
  test::write_file(dir / "swap.txt", swapped);
  if (text.substr(0, first) != text.substr(first + 1, second - first - 1)) {
    CHECK_THROWS_AS(metrics_from_files(path, EdgeFormat::Text, dir / "swap.txt"), ConsistencyError);
  }

  test::write_file(dir / "bad.txt", "1 2\n");
  CHECK_THROWS_AS(read_partition_file(dir / "bad.txt"), ParseError);
}

TEST_CASE("binary partition files") {
  TempDir dir;
  const auto path = rmat_file(dir, 5);
  const auto cfg = config_for(path, Algorithm::S5P, 4);
  write_partition(cfg, dir / "p.bin", PartitionFormat::Binary);
  const auto bytes = test::read_file(dir / "p.bin");
  CHECK(bytes.substr(0, 4) == "S5PP");
  CHECK(bytes.size() == 20 + 4 * (std::size_t{1} << 13));
  const auto file = read_partition_file(dir / "p.bin");
  CHECK_FALSE(file.has_endpoints);
  const auto r = run_partitioner(cfg);
  REQUIRE(file.records.size() == r.partition.assignment.size());
  for (std::size_t i = 0; i < file.records.size(); ++i) CHECK(file.records[i].p == r.partition.assignment[i]);

  test::write_file(dir / "trunc.bin", bytes.substr(0, bytes.size() - 2));
  CHECK_THROWS(read_partition_file(dir / "trunc.bin"));
}

TEST_CASE("writer checks the record count") {
  TempDir dir;
  test::write_file(dir / "t.txt", "0 1\n1 2\n");
  const auto stream = EdgeStream::open(dir / "t.txt", EdgeFormat::Text, OpenOptions{false});
  PartitionWriter w(dir / "out", PartitionFormat::Text, stream.edge_count(), 2, stream);
  w.write(Edge{0, 1}, 0);
  CHECK_THROWS_AS(w.close(), ConsistencyError);
}
