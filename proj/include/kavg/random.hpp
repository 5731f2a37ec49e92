#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace kavg {

// Every trajectory draws from its own Mersenne Twister (64-bit). The engine's
// output sequence is fixed by the C++ standard, so trajectories replay
// identically on any conforming library.
using TrialRng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 0x6b61766731303031ULL;

// SplitMix64 output function.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`: the (index+1)-th output of a
/// SplitMix64 generator whose state starts at `master`. Distinct indices give
/// decorrelated seeds, and any single stream can be rebuilt on its own.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

inline TrialRng trial_rng(std::uint64_t master, std::uint64_t trial) {
  return TrialRng(derive_seed(master, trial));
}

/// Uniform integer in [0, bound) by Lemire's multiply-and-reject method.
/// Consumes one 64-bit word, plus one more per rejection; a rejection happens
/// with probability below bound / 2^64.
template <class Engine>
std::uint64_t bounded_uniform(Engine& engine, std::uint64_t bound) {
  static_assert(Engine::min() == 0 && Engine::max() == std::numeric_limits<std::uint64_t>::max(),
                "bounded_uniform needs a full-range 64-bit engine");
  using u128 = unsigned __int128;
  u128 m = static_cast<u128>(engine()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(engine()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace kavg
