#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "s5p/types.hpp"

namespace s5p {

enum class EdgeFormat { Text, Binary };

EdgeFormat parse_edge_format(std::string_view name);
std::string_view to_string(EdgeFormat format);

/// Binary edge list: "S5PE", u32 version, u64 |E|, then |E| pairs of
/// little-endian u64.
inline constexpr char kBinaryEdgeMagic[4] = {'S', '5', 'P', 'E'};
inline constexpr std::uint32_t kBinaryEdgeVersion = 1;

using RawEdge = std::pair<std::uint64_t, std::uint64_t>;

/// Sequential reader over the raw (original-id) records of an edge file.
/// Text lines starting with '#' and blank lines are skipped.
class EdgeReader {
 public:
  EdgeReader(const std::filesystem::path& path, EdgeFormat format);
  ~EdgeReader();
  EdgeReader(const EdgeReader&) = delete;
  EdgeReader& operator=(const EdgeReader&) = delete;

  /// Returns false at end of input. Throws ParseError on a malformed record.
  bool next(RawEdge& edge);

 private:
  bool next_text(RawEdge& edge);
  bool next_binary(RawEdge& edge);
  bool fill();

  std::FILE* file_ = nullptr;
  EdgeFormat format_;
  std::vector<char> buffer_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  std::uint64_t line_ = 0;
  std::uint64_t declared_ = 0;
  std::uint64_t produced_ = 0;
};

/// Original -> compact vertex id translation, compact ids assigned in order
/// of first appearance in the stream.
class IdMap {
 public:
  VertexId insert(std::uint64_t original);
  VertexId at(std::uint64_t original) const;
  std::uint64_t original(VertexId id) const { return originals_[id]; }
  VertexId size() const { return static_cast<VertexId>(originals_.size()); }

  /// Switches to a flat lookup table when the original ids are dense enough.
  void freeze();
  void save(const std::filesystem::path& path) const;
  std::size_t memory_bytes() const;

 private:
  std::unordered_map<std::uint64_t, VertexId> sparse_;
  std::vector<VertexId> dense_;
  std::vector<std::uint64_t> originals_;
  bool frozen_dense_ = false;
};

struct OpenOptions {
  /// Write "<input>.idmap" next to the input.
  bool persist_idmap = true;
};

/// Replayable edge stream over an on-disk edge list. Opening performs one
/// counting pass that also compacts vertex ids; every later pass re-reads
/// the file and yields the same sequence.
class EdgeStream {
 public:
  static EdgeStream open(const std::filesystem::path& path, EdgeFormat format,
                         const OpenOptions& options = {});

  std::uint64_t edge_count() const noexcept { return edge_count_; }
  VertexId vertex_count() const noexcept { return ids_->size(); }
  const std::filesystem::path& path() const noexcept { return path_; }
  EdgeFormat format() const noexcept { return format_; }
  std::uint64_t original_id(VertexId v) const { return ids_->original(v); }
  const IdMap& id_map() const noexcept { return *ids_; }

  /// One full sequential pass; `fn(EdgeIndex, const Edge&)`.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    EdgeReader reader(path_, format_);
    RawEdge raw;
    EdgeIndex index = 0;
    while (reader.next(raw)) {
      const Edge e{ids_->at(raw.first), ids_->at(raw.second)};
      fn(index, e);
      ++index;
    }
  }

  /// Order-sensitive hash of one full pass.
  std::uint64_t checksum() const;

 private:
  EdgeStream() = default;

  std::filesystem::path path_;
  EdgeFormat format_ = EdgeFormat::Text;
  std::uint64_t edge_count_ = 0;
  std::shared_ptr<IdMap> ids_;
};

void write_text_edges(const std::filesystem::path& path, std::span<const RawEdge> edges);
void write_binary_edges(const std::filesystem::path& path, std::span<const RawEdge> edges);
std::vector<RawEdge> read_raw_edges(const std::filesystem::path& path, EdgeFormat format);

/// Global degrees; a self-loop contributes 2 to its endpoint.
struct DegreeTable {
  std::vector<std::uint64_t> degree;
  std::uint64_t d_min = 0;
  std::uint64_t d_max = 0;

  std::uint64_t operator[](VertexId v) const { return degree[v]; }
  std::size_t memory_bytes() const { return degree.capacity() * sizeof(std::uint64_t); }
};

DegreeTable compute_degrees(const EdgeStream& stream);

/// xi = beta * 2|E| / |V|.
double degree_threshold(std::uint64_t edge_count, VertexId vertex_count, double beta);

/// Head iff both endpoints have degree strictly above `xi`.
inline EdgeKind classify_edge(const Edge& e, const DegreeTable& degrees, double xi) {
  const auto du = static_cast<double>(degrees[e.u]);
  const auto dv = static_cast<double>(degrees[e.v]);
  return (du > xi && dv > xi) ? EdgeKind::Head : EdgeKind::Tail;
}

}  // namespace s5p
