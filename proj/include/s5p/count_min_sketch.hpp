#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "s5p/types.hpp"

namespace s5p {

struct SketchConfig {
  /// Additive error as a fraction of the total inserted count.
  double epsilon = 0.1;
  /// Probability that a query exceeds the additive error.
  double nu = 0.01;
  /// Master seed; row seeds are derived from it.
  std::uint64_t seed = 0x5eed5eedULL;

  /// ceil(e / epsilon).
  std::size_t width() const;
  /// ceil(ln(1 / nu)).
  std::size_t rows() const;
};

/// Count-min sketch over byte-string keys. Each row hashes with a seeded
/// polynomial over 64-bit words in GF(2^61 - 1) followed by a random affine
/// map, then reduces modulo the width.
class CountMinSketch {
 public:
  explicit CountMinSketch(const SketchConfig& cfg);

  void insert(std::span<const std::byte> key, std::uint64_t count = 1);
  /// Minimum over the rows; never below the true count.
  std::uint64_t query(std::span<const std::byte> key) const;

  /// 16-byte key: min id then max id, each little-endian u64, so the
  /// pair is unordered.
  static std::array<std::byte, 16> pair_key(ClusterId a, ClusterId b);
  void insert_pair(ClusterId a, ClusterId b, std::uint64_t count = 1);
  std::uint64_t query_pair(ClusterId a, ClusterId b) const;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t width() const noexcept { return width_; }
  /// Total inserted count N.
  std::uint64_t total() const noexcept { return total_; }
  std::size_t memory_bytes() const { return counters_.capacity() * sizeof(std::uint64_t); }

 private:
  struct RowHash {
    std::uint64_t point;
    std::uint64_t mul;
    std::uint64_t add;
  };

  std::size_t bucket(std::size_t row, std::span<const std::byte> key) const;

  std::size_t rows_;
  std::size_t width_;
  std::vector<RowHash> hashes_;
  std::vector<std::uint64_t> counters_;
  std::uint64_t total_ = 0;
};

}  // namespace s5p
