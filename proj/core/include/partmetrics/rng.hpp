#pragma once

#include <cstdint>

namespace partmetrics {

// Identifies one reproducible random stream. Identical (root, stream)
// always yields the identical draw sequence, independent of worker
// count or execution order; per-sample streams are derived by offsetting
// `stream` with the sample index.
struct Seed {
  std::uint64_t root = 0;
  std::uint64_t stream = 0;

  Seed substream(std::uint64_t index) const { return {root, stream + index}; }
  bool operator==(const Seed&) const = default;
};

// Counter-based splitmix64 generator. Small state, fully portable
// output, good enough to pass the chi-square gates in the test suite.
class Rng {
public:
  explicit Rng(Seed seed) {
    state_ = mix(mix(seed.root + 0x9E3779B97F4A7C15ULL) ^ seed.stream);
    state_ = mix(state_ + seed.stream);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace partmetrics
