#ifndef TSQM_RNG_HPP
#define TSQM_RNG_HPP

#include <cstdint>
#include <random>

namespace tsqm {

// splitmix64 step; used to derive independent per-trial seeds from a root
// seed so Monte Carlo results are bit-identical regardless of trial order.
inline std::uint64_t seed_mix(std::uint64_t root, std::uint64_t trial) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 trial_rng(std::uint64_t root, std::uint64_t trial) {
  return std::mt19937_64(seed_mix(root, trial));
}

// Uniform in [0,1) with 53 random bits. std::uniform_real_distribution is
// implementation-defined, which would break the bit-reproducibility contract.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// One standard normal via Box-Muller (no cached spare, stateless).
inline double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  while (u1 == 0.0) u1 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace tsqm

#endif  // TSQM_RNG_HPP
