#include "s5p/count_min_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "s5p/error.hpp"

namespace s5p {

namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_prime(u128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t r = lo + hi;
  r = (r & kPrime) + (r >> 61);
  return r >= kPrime ? r - kPrime : r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return mod_prime(static_cast<u128>(a) * b);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t field_element(std::uint64_t& state, bool nonzero) {
  for (;;) {
    const std::uint64_t x = splitmix64(state) & kPrime;
    if (x < kPrime && (!nonzero || x != 0)) return x;
  }
}

}  // namespace

std::size_t SketchConfig::width() const {
  if (!(epsilon > 0.0)) throw ConfigError("sketch epsilon must be positive");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(std::numbers::e / epsilon)));
}

std::size_t SketchConfig::rows() const {
  if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("sketch nu must lie in (0, 1)");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(1.0 / nu))));
}

CountMinSketch::CountMinSketch(const SketchConfig& cfg)
    : rows_(cfg.rows()), width_(cfg.width()), counters_(rows_ * width_, 0) {
  std::uint64_t state = cfg.seed;
  hashes_.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    RowHash h{};
    h.point = field_element(state, true);
    h.mul = field_element(state, true);
    h.add = field_element(state, false);
    hashes_.push_back(h);
  }
}

std::size_t CountMinSketch::bucket(std::size_t row, std::span<const std::byte> key) const {
  const RowHash& h = hashes_[row];
  // Horner evaluation over 56-bit chunks so every chunk is a field element;
  // the length is folded in last to separate keys that differ only in padding.
  std::uint64_t acc = 0;
  std::size_t i = 0;
  while (i < key.size()) {
    std::uint64_t chunk = 0;
    const std::size_t n = std::min<std::size_t>(7, key.size() - i);
    for (std::size_t b = 0; b < n; ++b) {
      chunk |= static_cast<std::uint64_t>(key[i + b]) << (8 * b);
    }
    acc = mod_prime(static_cast<u128>(acc) * h.point + chunk);
    i += n;
  }
  acc = mod_prime(static_cast<u128>(acc) * h.point + key.size());
  const std::uint64_t mixed = mod_prime(static_cast<u128>(mul_mod(acc, h.mul)) + h.add);
  return static_cast<std::size_t>(mixed % width_);
}

void CountMinSketch::insert(std::span<const std::byte> key, std::uint64_t count) {
  for (std::size_t r = 0; r < rows_; ++r) counters_[r * width_ + bucket(r, key)] += count;
  total_ += count;
}

std::uint64_t CountMinSketch::query(std::span<const std::byte> key) const {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t r = 0; r < rows_; ++r) {
    best = std::min(best, counters_[r * width_ + bucket(r, key)]);
  }
  return best;
}

std::array<std::byte, 16> CountMinSketch::pair_key(ClusterId a, ClusterId b) {
  if (b < a) std::swap(a, b);
  std::array<std::byte, 16> key{};
  const std::uint64_t ids[2] = {a, b};
  for (int w = 0; w < 2; ++w) {
    for (int i = 0; i < 8; ++i) key[8 * w + i] = static_cast<std::byte>(ids[w] >> (8 * i));
  }
  return key;
}

void CountMinSketch::insert_pair(ClusterId a, ClusterId b, std::uint64_t count) {
  insert(pair_key(a, b), count);
}

std::uint64_t CountMinSketch::query_pair(ClusterId a, ClusterId b) const {
  return query(pair_key(a, b));
}

}  // namespace s5p
