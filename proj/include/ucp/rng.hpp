#pragma once

#include <cstdint>
#include <random>

namespace ucp {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent per-cycle streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of cycle `cycle_index`: splitmix64(splitmix64(run_seed) ^ cycle_index).
/// Depends only on the pair, so cycles can be evaluated in any order.
constexpr std::uint64_t cycle_seed(std::uint64_t run_seed, std::uint64_t cycle_index) {
  return splitmix64(splitmix64(run_seed) ^ cycle_index);
}

inline Rng cycle_rng(std::uint64_t run_seed, std::uint64_t cycle_index) {
  return Rng(cycle_seed(run_seed, cycle_index));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01(rng) < p;
}

}  // namespace ucp
