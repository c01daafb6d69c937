#pragma once

#include <cmath>
#include <cstdint>

namespace tcsd {

// Counter-based random streams: sample i of stream `seed` depends only on
// (seed, i), so parallel loops draw identical values in any schedule and the
// output is reproducible across platforms (unlike std::normal_distribution,
// whose algorithm is implementation-defined).

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the k-th draw of sample i under `seed`.
inline double uniform01(std::uint64_t seed, std::uint64_t i, std::uint64_t k = 0) {
  std::uint64_t z = splitmix64(seed ^ splitmix64(i * 0x9e3779b97f4a7c15ULL + k));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Uniform in [lo, hi).
inline double uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t k,
                      double lo, double hi) {
  return lo + (hi - lo) * uniform01(seed, i, k);
}

// Standard normal via Box-Muller on draws (2k, 2k+1) of sample i.
inline double normal01(std::uint64_t seed, std::uint64_t i, std::uint64_t k = 0) {
  double u1 = uniform01(seed, i, 2 * k);
  double u2 = uniform01(seed, i, 2 * k + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace tcsd
