#include "s5p/graph_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>

#include "s5p/error.hpp"

namespace s5p {

namespace {

constexpr std::size_t kReadChunk = 1 << 20;
constexpr VertexId kAbsent = std::numeric_limits<VertexId>::max();

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::uint64_t load_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint32_t load_le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_le64(unsigned char* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

void store_le32(unsigned char* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

// Parses one text line into two ids. Returns false for comments and blank lines.
bool parse_line(std::string_view line, std::uint64_t lineno, RawEdge& out) {
  std::size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  if (i == line.size() || line[i] == '#') return false;

  std::uint64_t values[2];
  for (int field = 0; field < 2; ++field) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size()) throw ParseError("expected two vertex ids", lineno);
    const char* first = line.data() + i;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, values[field]);
    if (ec != std::errc() || ptr == first || (ptr != last && !is_space(*ptr))) {
      throw ParseError("invalid vertex id '" + std::string(first, std::find_if(first, last, is_space)) + "'",
                       lineno);
    }
    i = static_cast<std::size_t>(ptr - line.data());
  }
  while (i < line.size() && is_space(line[i])) ++i;
  if (i != line.size()) throw ParseError("trailing data after edge", lineno);
  out = {values[0], values[1]};
  return true;
}

}  // namespace

EdgeFormat parse_edge_format(std::string_view name) {
  if (name == "text" || name == "text-edgelist") return EdgeFormat::Text;
  if (name == "binary" || name == "binary-edgelist") return EdgeFormat::Binary;
  throw ConfigError("unknown edge format '" + std::string(name) + "'");
}

std::string_view to_string(EdgeFormat format) {
  return format == EdgeFormat::Text ? "text" : "binary";
}

// ---------------------------------------------------------------------------
// EdgeReader

EdgeReader::EdgeReader(const std::filesystem::path& path, EdgeFormat format)
    : format_(format), buffer_(kReadChunk) {
  file_ = std::fopen(path.c_str(), "rb");
  if (file_ == nullptr) throw IoError("cannot open edge file " + path.string());
  if (format_ == EdgeFormat::Binary) {
    std::array<unsigned char, 16> header{};
    if (std::fread(header.data(), 1, header.size(), file_) != header.size()) {
      std::fclose(file_);
      file_ = nullptr;
      throw ParseError("truncated binary edge header", 0);
    }
    if (std::memcmp(header.data(), kBinaryEdgeMagic, 4) != 0) {
      std::fclose(file_);
      file_ = nullptr;
      throw ParseError("bad binary edge magic", 0);
    }
    const std::uint32_t version = load_le32(header.data() + 4);
    if (version != kBinaryEdgeVersion) {
      std::fclose(file_);
      file_ = nullptr;
      throw ParseError("unsupported binary edge version " + std::to_string(version), 0);
    }
    declared_ = load_le64(header.data() + 8);
  }
}

EdgeReader::~EdgeReader() {
  if (file_ != nullptr) std::fclose(file_);
}

bool EdgeReader::fill() {
  if (eof_) return false;
  if (pos_ > 0) {
    std::memmove(buffer_.data(), buffer_.data() + pos_, end_ - pos_);
    end_ -= pos_;
    pos_ = 0;
  }
  if (end_ == buffer_.size()) buffer_.resize(buffer_.size() * 2);
  const std::size_t got = std::fread(buffer_.data() + end_, 1, buffer_.size() - end_, file_);
  if (got == 0) {
    if (std::ferror(file_)) throw IoError("read error on edge file");
    eof_ = true;
    return false;
  }
  end_ += got;
  return true;
}

bool EdgeReader::next(RawEdge& edge) {
  return format_ == EdgeFormat::Text ? next_text(edge) : next_binary(edge);
}

bool EdgeReader::next_text(RawEdge& edge) {
  for (;;) {
    const char* begin = buffer_.data() + pos_;
    const void* nl = std::memchr(begin, '\n', end_ - pos_);
    std::string_view line;
    if (nl == nullptr) {
      if (fill()) continue;
      if (pos_ == end_) return false;
      // Final line without a trailing newline.
      line = std::string_view(buffer_.data() + pos_, end_ - pos_);
      pos_ = end_;
    } else {
      const auto* stop = static_cast<const char*>(nl);
      line = std::string_view(begin, static_cast<std::size_t>(stop - begin));
      pos_ += line.size() + 1;
    }
    ++line_;
    if (parse_line(line, line_, edge)) return true;
  }
}

bool EdgeReader::next_binary(RawEdge& edge) {
  if (produced_ == declared_) return false;
  while (end_ - pos_ < 16) {
    if (!fill()) throw ParseError("binary edge list shorter than declared count", produced_ + 1);
  }
  const auto* p = reinterpret_cast<const unsigned char*>(buffer_.data() + pos_);
  edge = {load_le64(p), load_le64(p + 8)};
  pos_ += 16;
  ++produced_;
  return true;
}

// ---------------------------------------------------------------------------
// IdMap

VertexId IdMap::insert(std::uint64_t original) {
  auto [it, fresh] = sparse_.try_emplace(original, static_cast<VertexId>(originals_.size()));
  if (fresh) {
    if (originals_.size() >= std::numeric_limits<VertexId>::max()) {
      throw ConfigError("too many distinct vertices for 32-bit compact ids");
    }
    originals_.push_back(original);
  }
  return it->second;
}

VertexId IdMap::at(std::uint64_t original) const {
  if (frozen_dense_) {
    if (original < dense_.size() && dense_[original] != kAbsent) return dense_[original];
  } else if (auto it = sparse_.find(original); it != sparse_.end()) {
    return it->second;
  }
  throw ConsistencyError("vertex id " + std::to_string(original) + " not seen at open time");
}

void IdMap::freeze() {
  if (originals_.empty()) return;
  const std::uint64_t max_id = *std::max_element(originals_.begin(), originals_.end());
  // Flat table only when it costs at most a few words per vertex.
  if (max_id < 8 * originals_.size() + 1024) {
    dense_.assign(max_id + 1, kAbsent);
    for (VertexId i = 0; i < originals_.size(); ++i) dense_[originals_[i]] = i;
    frozen_dense_ = true;
    sparse_ = {};
  }
}

void IdMap::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write id map " + path.string());
  std::string line;
  for (VertexId i = 0; i < originals_.size(); ++i) {
    line.clear();
    line += std::to_string(originals_[i]);
    line += ' ';
    line += std::to_string(i);
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("failed writing id map " + path.string());
}

std::size_t IdMap::memory_bytes() const {
  return originals_.capacity() * sizeof(std::uint64_t) + dense_.capacity() * sizeof(VertexId) +
         sparse_.size() * (sizeof(std::uint64_t) + sizeof(VertexId) + 2 * sizeof(void*));
}

// ---------------------------------------------------------------------------
// EdgeStream

EdgeStream EdgeStream::open(const std::filesystem::path& path, EdgeFormat format,
                            const OpenOptions& options) {
  EdgeStream s;
  s.path_ = path;
  s.format_ = format;
  s.ids_ = std::make_shared<IdMap>();

  EdgeReader reader(path, format);
  RawEdge raw;
  while (reader.next(raw)) {
    s.ids_->insert(raw.first);
    s.ids_->insert(raw.second);
    ++s.edge_count_;
  }
  if (s.edge_count_ == 0) throw ParseError("edge list is empty: " + path.string(), 0);
  s.ids_->freeze();
  if (options.persist_idmap) {
    s.ids_->save(std::filesystem::path(path.string() + ".idmap"));
  }
  return s;
}

std::uint64_t EdgeStream::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  for_each([&](EdgeIndex, const Edge& e) {
    mix(e.u);
    mix(e.v);
  });
  return h;
}

void write_text_edges(const std::filesystem::path& path, std::span<const RawEdge> edges) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw IoError("cannot write edge file " + path.string());
  std::string buf;
  buf.reserve(1 << 16);
  char num[24];
  auto put = [&](std::uint64_t x) {
    auto [p, ec] = std::to_chars(num, num + sizeof(num), x);
    buf.append(num, p);
  };
  for (const auto& [u, v] : edges) {
    put(u);
    buf += ' ';
    put(v);
    buf += '\n';
    if (buf.size() > (1 << 16) - 64) {
      std::fwrite(buf.data(), 1, buf.size(), f);
      buf.clear();
    }
  }
  std::fwrite(buf.data(), 1, buf.size(), f);
  const bool bad = std::ferror(f) != 0;
  std::fclose(f);
  if (bad) throw IoError("failed writing edge file " + path.string());
}

void write_binary_edges(const std::filesystem::path& path, std::span<const RawEdge> edges) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw IoError("cannot write edge file " + path.string());
  unsigned char header[16];
  std::memcpy(header, kBinaryEdgeMagic, 4);
  store_le32(header + 4, kBinaryEdgeVersion);
  store_le64(header + 8, edges.size());
  std::fwrite(header, 1, sizeof(header), f);
  unsigned char rec[16];
  for (const auto& [u, v] : edges) {
    store_le64(rec, u);
    store_le64(rec + 8, v);
    std::fwrite(rec, 1, sizeof(rec), f);
  }
  const bool bad = std::ferror(f) != 0;
  std::fclose(f);
  if (bad) throw IoError("failed writing edge file " + path.string());
}

std::vector<RawEdge> read_raw_edges(const std::filesystem::path& path, EdgeFormat format) {
  EdgeReader reader(path, format);
  std::vector<RawEdge> out;
  RawEdge raw;
  while (reader.next(raw)) out.push_back(raw);
  return out;
}

// ---------------------------------------------------------------------------
// Degrees

DegreeTable compute_degrees(const EdgeStream& stream) {
  DegreeTable t;
  t.degree.assign(stream.vertex_count(), 0);
  stream.for_each([&](EdgeIndex, const Edge& e) {
    ++t.degree[e.u];
    ++t.degree[e.v];
  });
  auto [lo, hi] = std::minmax_element(t.degree.begin(), t.degree.end());
  t.d_min = *lo;
  t.d_max = *hi;
  return t;
}

double degree_threshold(std::uint64_t edge_count, VertexId vertex_count, double beta) {
  if (vertex_count == 0) throw ConfigError("degree threshold needs a non-empty vertex set");
  return beta * 2.0 * static_cast<double>(edge_count) / static_cast<double>(vertex_count);
}

}  // namespace s5p
