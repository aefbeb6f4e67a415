#pragma once

#include <cstdint>
#include <random>

namespace qpnls {

/// All randomness in the project flows through mt19937_64 streams derived
/// from (seed, stream index) with a splitmix64 scrambler, so Monte-Carlo
/// results are reproducible and independent of worker count.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

/// Uniform double in [0, 1) built from the top 53 bits; identical on every
/// conforming platform (no distribution-object variability).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace qpnls
