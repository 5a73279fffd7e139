#pragma once

#include <cstdint>
#include <random>

namespace ssadr {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic generator for one consumer of randomness within a run.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng{mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x5bd1e995ULL))};
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>{0.0, 1.0}(rng);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>{0.0, 1.0}(rng);
}

}  // namespace ssadr
