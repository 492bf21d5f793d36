#ifndef MWINDEX_RNG_HPP
#define MWINDEX_RNG_HPP

// Deterministic random streams for the Monte Carlo oracle. SplitMix64
// is a splittable integer generator: the raw 64-bit stream is identical
// on every platform for a given seed, and block sub-streams are derived
// arithmetically so a blocked run is reproducible regardless of how the
// blocks are scheduled.

#include <cmath>
#include <cstdint>

#include "mwindex/constants.hpp"

namespace mwindex {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Deterministically derived sub-stream for block `index`.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ull * (index + 1)));
    return SplitMix64(mixer.next());
  }
};

/// Standard-normal deviate via Box-Muller (one value per call; the
/// second root is discarded to keep the stream layout simple).
inline double gaussian(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform(); // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * constants::pi * u2);
}

} // namespace mwindex

#endif
