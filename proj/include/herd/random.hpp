// include/herd/random.hpp
//
// Deterministic random streams for the Monte Carlo driver.
//
// Every variate produced here is a bit-exact function of the 64-bit stream
// seed, independent of compiler and standard library:
//   - engine:   std::mt19937_64, whose output sequence is fixed by the C++
//               standard for a given seed;
//   - uniform:  top 53 bits of one engine word scaled by 2^-53, giving a
//               double in [0, 1);
//   - normal:   Marsaglia polar method. Two uniforms u, v in (-1, 1) are drawn
//               until s = u^2 + v^2 lies in (0, 1); the pair
//               u*sqrt(-2 ln s / s), v*sqrt(-2 ln s / s) is returned over two
//               calls (first u-branch, then the cached v-branch).
// The polar method touches only +, *, sqrt and log, so results agree across
// platforms whose libm log is correctly rounded (glibc, musl, MSVC UCRT).

#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace herd {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal variate via the polar method.
  double standard_normal();

  double normal(double mean, double sd) { return mean + sd * standard_normal(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace herd
