#pragma once

#include <cstdint>

namespace geonet {

// Counter-based generator (SplitMix64 applied to seed + counter * golden gamma).
// Stateless draws: the same (seed, counter) pair yields the same value on every
// platform, which is what makes randomized batteries reproducible bit-for-bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const {
    std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 significant bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Deterministic Halton sequence, bases 2 and 3; used for low-discrepancy
// coverage of the triangle domain.
inline double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  for (std::uint64_t i = index; i > 0; i /= base) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
  }
  return r;
}

}  // namespace geonet
