#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "kavg/chain.hpp"
#include "kavg/metrics.hpp"

namespace kavg {

// Exact-rational runs are limited to oracle scale: denominators grow like
// k^l times the initial common denominator.
inline constexpr std::size_t kExactMaxN = 12;
inline constexpr std::uint64_t kExactMaxSteps = 8;

using ChoiceSink = std::function<void(const SubsetChoice&)>;

struct RunOptions {
  std::uint64_t l_max = 0;
  std::uint64_t record_every = 1;
  std::uint64_t trial = 0;  // selects the per-trial stream derived from params.seed
  ChoiceSink on_choice;     // sees every sampled subset, in order
};

/// Runs l_max steps from x0 and records a sample at l = 0, every
/// record_every steps, and at l_max. Precision follows params.mode.
std::vector<MetricsSample> run(const ChainParams& params, std::span<const double> x0,
                               const RunOptions& options);

std::vector<MetricsSample> run(const ChainParams& params, std::span<const double> x0,
                               std::uint64_t l_max, std::uint64_t record_every);

/// Re-executes a logged subset sequence. params.seed is unused.
std::vector<MetricsSample> replay(const ChainParams& params, std::span<const double> x0,
                                  std::span<const SubsetChoice> choices, std::uint64_t record_every);

// Replay log: one subset per line, 1-based indices, ascending, single spaces.
void write_replay_line(std::ostream& os, const SubsetChoice& choice);
/// Parses a replay log, checking every line holds k distinct indices in [1, n].
std::vector<SubsetChoice> read_replay_log(std::istream& is, std::size_t n, std::size_t k);

}  // namespace kavg
