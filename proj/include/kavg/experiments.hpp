#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kavg/chain.hpp"
#include "kavg/metrics.hpp"
#include "kavg/random.hpp"
#include "kavg/stats.hpp"

namespace kavg {

inline constexpr std::uint64_t kDefaultMaxSteps = 100'000'000;
/// Thresholds used by the mixing-time experiment when the config gives none.
inline constexpr std::array<double, 2> kDefaultEpsilons{0.1, 0.01};

struct ExperimentConfig {
  std::vector<std::size_t> n_grid;
  std::vector<std::size_t> k_grid;
  std::vector<double> theta_grid;
  std::vector<double> a_grid;
  std::optional<double> epsilon;
  std::size_t replications = 1;
  std::uint64_t master_seed = kDefaultSeed;
  std::uint64_t max_steps = kDefaultMaxSteps;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Field-level invariants; throws ConfigValueError naming the key.
void validate(const ExperimentConfig& config);

/// Seed of the stream family used for grid point (n, k). Trial i of that
/// point runs on trial_rng(grid_seed(master, n, k), i).
std::uint64_t grid_seed(std::uint64_t master, std::size_t n, std::size_t k);

// ---------------------------------------------------------------------------
// Mixing window sweep

/// floor(theta * n * ln n)
std::uint64_t theta_steps(std::size_t n, double theta);

struct ThetaRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double theta = 0.0;
  std::uint64_t steps = 0;
  SummaryStats t_l1;
};

/// T(floor(theta n ln n)) from x0 = (1, 0, ..., 0) for every grid point. All
/// thetas of one (n, k) are read off the same R trajectories.
std::vector<ThetaRow> theta_sweep(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Hitting times

struct HittingTime {
  std::uint64_t steps = 0;
  bool censored = false;  // threshold not reached within max_steps; steps == max_steps

  friend bool operator==(const HittingTime&, const HittingTime&) = default;
};

/// First l with T(l) <= epsilon on trial `trial` of params.seed.
HittingTime mixing_time_trial(const ChainParams& params, std::span<const double> x0, double epsilon,
                              std::uint64_t max_steps, std::uint64_t trial = 0);

/// Hitting times of several thresholds along one trajectory.
std::vector<HittingTime> hitting_times(const ChainParams& params, std::span<const double> x0,
                                       std::span<const double> epsilons, std::uint64_t max_steps,
                                       TrialRng& rng);

struct MixingRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double epsilon = 0.0;
  double median_hit = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double censored_frac = 0.0;
  std::size_t r = 0;
};

/// Quantiles of hitting times from x0 = (1, 0, ..., 0). Censored trials enter
/// at max_steps and are counted in censored_frac.
std::vector<MixingRow> mixing_time(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Cutoff profile

/// floor(n (log_k n + a sqrt(log_k n)) / k); may be negative.
std::int64_t cutoff_step(std::size_t n, std::size_t k, double a);
/// log_k n, exact when n is a power of k.
double log_base(std::size_t n, std::size_t k);

struct CutoffRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double a = 0.0;
  std::int64_t steps = 0;
  std::optional<SummaryStats> t_l1;  // empty when the row is flagged
  double ref_2phi = 0.0;             // 2 Phi(-a)
  std::string flag;                  // "ok" or "negative_step"
};

std::vector<CutoffRow> cutoff_profile(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Poissonized chain

/// State at time t of the chain driven by a rate-1 Poisson clock: draws
/// N ~ Poisson(t) exactly, then runs N discrete steps on the same stream.
/// The returned sample has l = N.
MetricsSample poisson_run(const ChainParams& params, std::span<const double> x0, double t, TrialRng& rng);

struct PoissonRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double t = 0.0;
  std::size_t r = 0;
  SummaryStats events;
  SummaryStats s_l2;
  double predicted_s = 0.0;  // exp(-(k-1) t / (n-1)) S(0)
};

/// R independent poisson_run draws from x0 = (1, 0, ..., 0).
PoissonRow poisson_experiment(const ChainParams& params, double t, std::size_t replications);

}  // namespace kavg
