#include "kavg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <string>
#include <thread>

#include "kavg/errors.hpp"
#include "kavg/parallel.hpp"

namespace kavg {

std::size_t worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate(const ExperimentConfig& config) {
  for (auto n : config.n_grid) {
    if (n < 2) throw ConfigValueError("n_grid: n must be >= 2 (got " + std::to_string(n) + ")", "n_grid");
  }
  for (auto k : config.k_grid) {
    if (k < 2) throw ConfigValueError("k_grid: k must be >= 2 (got " + std::to_string(k) + ")", "k_grid");
  }
  for (auto n : config.n_grid) {
    for (auto k : config.k_grid) {
      if (k > n) {
        throw ConfigValueError("k_grid: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n),
                               "k_grid");
      }
    }
  }
  for (double theta : config.theta_grid) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
      throw ConfigValueError("theta_grid: theta must be a positive finite real", "theta_grid");
    }
  }
  for (double a : config.a_grid) {
    if (!std::isfinite(a)) throw ConfigValueError("a_grid: a must be finite", "a_grid");
  }
  if (config.epsilon && !(*config.epsilon > 0.0 && *config.epsilon < 2.0)) {
    throw ConfigValueError("epsilon must lie in (0, 2)", "epsilon");
  }
  if (config.replications < 1) throw ConfigValueError("replications must be >= 1", "replications");
  if (config.max_steps < 1) throw ConfigValueError("max_steps must be >= 1", "max_steps");
}

std::uint64_t grid_seed(std::uint64_t master, std::size_t n, std::size_t k) {
  return derive_seed(derive_seed(master, n), k);
}

namespace {

void require_grid(const char* key, bool nonempty) {
  if (!nonempty) throw ConfigValueError(std::string(key) + " must be nonempty for this experiment", key);
}

void require_budget(std::uint64_t steps, const ExperimentConfig& config) {
  if (steps > config.max_steps) {
    throw ConfigValueError("step budget " + std::to_string(steps) + " exceeds max_steps = " +
                               std::to_string(config.max_steps),
                           "max_steps");
  }
}

/// T at each of the requested step counts (ascending) along one trajectory.
std::vector<double> l1_at_steps(const ChainParams& params, std::span<const std::uint64_t> checkpoints,
                                TrialRng& rng) {
  AveragingState<double> state(basis_vector(params.n));
  std::vector<double> out;
  out.reserve(checkpoints.size());
  SubsetChoice choice;
  for (auto target : checkpoints) {
    while (state.step_count() < target) {
      sample_k_subset(rng, params.n, params.k, choice);
      state.average(choice);
    }
    out.push_back(l1_deviation(state));
  }
  return out;
}

struct Checkpoints {
  std::vector<std::uint64_t> steps;  // sorted, unique
  std::uint64_t index_of(std::uint64_t s) const {
    return static_cast<std::uint64_t>(std::lower_bound(steps.begin(), steps.end(), s) - steps.begin());
  }
};

Checkpoints make_checkpoints(std::vector<std::uint64_t> steps) {
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return Checkpoints{std::move(steps)};
}

/// R trajectories of grid point (n, k); result[trial][checkpoint].
std::vector<std::vector<double>> sample_l1_table(const ExperimentConfig& config, std::size_t n, std::size_t k,
                                                 const Checkpoints& cp) {
  ChainParams params{n, k, grid_seed(config.master_seed, n, k), NumericMode::Float64};
  return parallel_map(config.replications, [&](std::size_t trial) {
    TrialRng rng = trial_rng(params.seed, trial);
    return l1_at_steps(params, cp.steps, rng);
  });
}

}  // namespace

std::uint64_t theta_steps(std::size_t n, double theta) {
  const double nd = static_cast<double>(n);
  return static_cast<std::uint64_t>(std::floor(theta * nd * std::log(nd)));
}

std::vector<ThetaRow> theta_sweep(const ExperimentConfig& config) {
  validate(config);
  require_grid("n_grid", !config.n_grid.empty());
  require_grid("k_grid", !config.k_grid.empty());
  require_grid("theta_grid", !config.theta_grid.empty());

  std::vector<ThetaRow> rows;
  for (auto n : config.n_grid) {
    for (auto k : config.k_grid) {
      std::vector<std::uint64_t> steps;
      for (double theta : config.theta_grid) {
        steps.push_back(theta_steps(n, theta));
        require_budget(steps.back(), config);
      }
      const Checkpoints cp = make_checkpoints(steps);
      const auto table = sample_l1_table(config, n, k, cp);
      for (std::size_t i = 0; i < config.theta_grid.size(); ++i) {
        const auto col = cp.index_of(steps[i]);
        std::vector<double> samples;
        samples.reserve(table.size());
        for (const auto& trial : table) samples.push_back(trial[col]);
        rows.push_back(ThetaRow{n, k, config.theta_grid[i], steps[i], summarize(samples)});
      }
    }
  }
  return rows;
}

std::vector<HittingTime> hitting_times(const ChainParams& params, std::span<const double> x0,
                                       std::span<const double> epsilons, std::uint64_t max_steps,
                                       TrialRng& rng) {
  validate(params);
  if (x0.size() != params.n) throw DomainError("x0 length does not match n");
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
  }

  // Thresholds are reached in decreasing order since T never increases.
  std::vector<std::size_t> order(epsilons.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return epsilons[a] > epsilons[b]; });

  std::vector<HittingTime> out(epsilons.size(), HittingTime{max_steps, true});
  AveragingState<double> state(convert_vector<double>(x0));
  const double mean = state.initial_mean();
  const auto& x = state.values();

  // T is tracked incrementally (O(k) per step) and confirmed with the exact
  // index-ordered sum whenever the running value gets near a threshold.
  constexpr double kSlack = 1e-9;
  constexpr std::uint64_t kResyncEvery = 4096;
  double running = l1_deviation(state);
  std::size_t next = 0;

  auto settle = [&](std::uint64_t l) {
    while (next < order.size() && running <= epsilons[order[next]] + kSlack) {
      const double exact = l1_deviation(state);
      running = exact;
      if (exact > epsilons[order[next]]) break;
      out[order[next]] = HittingTime{l, false};
      ++next;
    }
  };

  settle(0);
  SubsetChoice choice;
  for (std::uint64_t l = 1; l <= max_steps && next < order.size(); ++l) {
    sample_k_subset(rng, params.n, params.k, choice);
    for (auto i : choice.indices()) running -= std::abs(x[static_cast<Eigen::Index>(i)] - mean);
    state.average(choice);
    for (auto i : choice.indices()) running += std::abs(x[static_cast<Eigen::Index>(i)] - mean);
    if (l % kResyncEvery == 0) running = l1_deviation(state);
    settle(l);
  }
  return out;
}

HittingTime mixing_time_trial(const ChainParams& params, std::span<const double> x0, double epsilon,
                              std::uint64_t max_steps, std::uint64_t trial) {
  TrialRng rng = trial_rng(params.seed, trial);
  const double eps[] = {epsilon};
  return hitting_times(params, x0, eps, max_steps, rng).front();
}

std::vector<MixingRow> mixing_time(const ExperimentConfig& config) {
  validate(config);
  require_grid("n_grid", !config.n_grid.empty());
  require_grid("k_grid", !config.k_grid.empty());
  std::vector<double> epsilons;
  if (config.epsilon) {
    epsilons.push_back(*config.epsilon);
  } else {
    epsilons.assign(kDefaultEpsilons.begin(), kDefaultEpsilons.end());
  }

  std::vector<MixingRow> rows;
  for (auto n : config.n_grid) {
    for (auto k : config.k_grid) {
      ChainParams params{n, k, grid_seed(config.master_seed, n, k), NumericMode::Float64};
      const Vector<double> x0 = basis_vector(n);
      const std::span<const double> x0_view(x0.data(), static_cast<std::size_t>(x0.size()));
      const auto table = parallel_map(config.replications, [&](std::size_t trial) {
        TrialRng rng = trial_rng(params.seed, trial);
        return hitting_times(params, x0_view, epsilons, config.max_steps, rng);
      });
      for (std::size_t e = 0; e < epsilons.size(); ++e) {
        std::vector<double> hits;
        std::size_t censored = 0;
        for (const auto& trial : table) {
          hits.push_back(static_cast<double>(trial[e].steps));
          censored += trial[e].censored ? 1 : 0;
        }
        std::sort(hits.begin(), hits.end());
        MixingRow row;
        row.n = n;
        row.k = k;
        row.epsilon = epsilons[e];
        row.median_hit = nearest_rank(hits, 0.5);
        row.q25 = nearest_rank(hits, 0.25);
        row.q75 = nearest_rank(hits, 0.75);
        row.censored_frac = static_cast<double>(censored) / static_cast<double>(hits.size());
        row.r = hits.size();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

double log_base(std::size_t n, std::size_t k) {
  if (k < 2) throw DomainError("log base must be >= 2");
  std::size_t power = 1;
  int exponent = 0;
  while (power < n && power <= n / k) {
    power *= k;
    ++exponent;
  }
  if (power == n) return exponent;
  return std::log(static_cast<double>(n)) / std::log(static_cast<double>(k));
}

std::int64_t cutoff_step(std::size_t n, std::size_t k, double a) {
  detail::check_subset_domain(n, k);
  const double lk = log_base(n, k);
  const double value = static_cast<double>(n) * (lk + a * std::sqrt(lk)) / static_cast<double>(k);
  return static_cast<std::int64_t>(std::floor(value));
}

std::vector<CutoffRow> cutoff_profile(const ExperimentConfig& config) {
  validate(config);
  require_grid("n_grid", !config.n_grid.empty());
  require_grid("k_grid", !config.k_grid.empty());
  require_grid("a_grid", !config.a_grid.empty());

  std::vector<CutoffRow> rows;
  for (auto n : config.n_grid) {
    for (auto k : config.k_grid) {
      std::vector<std::int64_t> steps;
      std::vector<std::uint64_t> valid;
      for (double a : config.a_grid) {
        steps.push_back(cutoff_step(n, k, a));
        if (steps.back() >= 0) {
          valid.push_back(static_cast<std::uint64_t>(steps.back()));
          require_budget(valid.back(), config);
        }
      }
      const Checkpoints cp = make_checkpoints(valid);
      std::vector<std::vector<double>> table;
      if (!cp.steps.empty()) table = sample_l1_table(config, n, k, cp);

      for (std::size_t i = 0; i < config.a_grid.size(); ++i) {
        CutoffRow row;
        row.n = n;
        row.k = k;
        row.a = config.a_grid[i];
        row.steps = steps[i];
        row.ref_2phi = 2.0 * normal_cdf(-row.a);
        if (steps[i] < 0) {
          row.flag = "negative_step";
        } else {
          const auto col = cp.index_of(static_cast<std::uint64_t>(steps[i]));
          std::vector<double> samples;
          samples.reserve(table.size());
          for (const auto& trial : table) samples.push_back(trial[col]);
          row.t_l1 = summarize(samples);
          row.flag = "ok";
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

MetricsSample poisson_run(const ChainParams& params, std::span<const double> x0, double t, TrialRng& rng) {
  validate(params);
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time t must be a finite nonnegative real");
  if (x0.size() != params.n) throw DomainError("x0 length does not match n");
  std::uint64_t events = 0;
  if (t > 0.0) {
    // libstdc++ samples this exactly: inversion below mean 12, Devroye's
    // rejection method above.
    std::poisson_distribution<std::int64_t> clock(t);
    events = static_cast<std::uint64_t>(clock(rng));
  }
  AveragingState<double> state(convert_vector<double>(x0));
  SubsetChoice choice;
  for (std::uint64_t i = 0; i < events; ++i) {
    sample_k_subset(rng, params.n, params.k, choice);
    state.average(choice);
  }
  return measure(state, params.k);
}

PoissonRow poisson_experiment(const ChainParams& params, double t, std::size_t replications) {
  validate(params);
  if (replications < 1) throw DomainError("replications must be >= 1");
  const Vector<double> x0 = basis_vector(params.n);
  const std::span<const double> x0_view(x0.data(), static_cast<std::size_t>(x0.size()));
  const auto samples = parallel_map(replications, [&](std::size_t trial) {
    TrialRng rng = trial_rng(params.seed, trial);
    return poisson_run(params, x0_view, t, rng);
  });
  std::vector<double> events;
  std::vector<double> energy;
  for (const auto& s : samples) {
    events.push_back(static_cast<double>(s.l));
    energy.push_back(s.s_l2);
  }
  PoissonRow row;
  row.n = params.n;
  row.k = params.k;
  row.t = t;
  row.r = replications;
  row.events = summarize(events);
  row.s_l2 = summarize(energy);
  const double s0 = l2_energy(AveragingState<double>(x0));
  const double rate = static_cast<double>(params.k - 1) / static_cast<double>(params.n - 1);
  row.predicted_s = std::exp(-rate * t) * s0;
  return row;
}

}  // namespace kavg
