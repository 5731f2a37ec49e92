#include "kavg/trajectory.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace kavg {
namespace {

void check_run_domain(const ChainParams& params, std::span<const double> x0, std::uint64_t l_max,
                      std::uint64_t record_every) {
  validate(params);
  if (x0.size() != params.n) {
    throw DomainError("x0 has " + std::to_string(x0.size()) + " entries, expected n = " +
                      std::to_string(params.n));
  }
  if (record_every < 1) throw DomainError("record_every must be >= 1");
  if (params.mode == NumericMode::ExactRational) {
    if (params.n > kExactMaxN) {
      throw ScaleError("exact mode supports n <= " + std::to_string(kExactMaxN));
    }
    if (l_max > kExactMaxSteps) {
      throw ScaleError("exact mode supports at most " + std::to_string(kExactMaxSteps) + " steps");
    }
  }
}

bool should_record(std::uint64_t l, std::uint64_t l_max, std::uint64_t every) {
  return l % every == 0 || l == l_max;
}

template <typename Scalar>
std::vector<MetricsSample> run_with(const ChainParams& params, std::span<const double> x0,
                                    const RunOptions& options) {
  AveragingState<Scalar> state(convert_vector<Scalar>(x0));
  TrialRng rng = trial_rng(params.seed, options.trial);
  std::vector<MetricsSample> out;
  out.push_back(measure(state, params.k));
  SubsetChoice choice;
  for (std::uint64_t l = 1; l <= options.l_max; ++l) {
    sample_k_subset(rng, params.n, params.k, choice);
    state.average(choice);
    if (options.on_choice) options.on_choice(choice);
    if (should_record(l, options.l_max, options.record_every)) out.push_back(measure(state, params.k));
  }
  return out;
}

template <typename Scalar>
std::vector<MetricsSample> replay_with(const ChainParams& params, std::span<const double> x0,
                                       std::span<const SubsetChoice> choices,
                                       std::uint64_t record_every) {
  AveragingState<Scalar> state(convert_vector<Scalar>(x0));
  const std::uint64_t l_max = choices.size();
  std::vector<MetricsSample> out;
  out.push_back(measure(state, params.k));
  for (std::uint64_t l = 1; l <= l_max; ++l) {
    const auto& choice = choices[l - 1];
    if (choice.size() != params.k) {
      throw DomainError("replayed subset at step " + std::to_string(l) + " has " +
                        std::to_string(choice.size()) + " indices, expected k = " +
                        std::to_string(params.k));
    }
    state.average(choice);
    if (should_record(l, l_max, record_every)) out.push_back(measure(state, params.k));
  }
  return out;
}

}  // namespace

std::vector<MetricsSample> run(const ChainParams& params, std::span<const double> x0,
                               const RunOptions& options) {
  check_run_domain(params, x0, options.l_max, options.record_every);
  if (params.mode == NumericMode::ExactRational) return run_with<Rational>(params, x0, options);
  return run_with<double>(params, x0, options);
}

std::vector<MetricsSample> run(const ChainParams& params, std::span<const double> x0,
                               std::uint64_t l_max, std::uint64_t record_every) {
  RunOptions options;
  options.l_max = l_max;
  options.record_every = record_every;
  return run(params, x0, options);
}

std::vector<MetricsSample> replay(const ChainParams& params, std::span<const double> x0,
                                  std::span<const SubsetChoice> choices, std::uint64_t record_every) {
  check_run_domain(params, x0, choices.size(), record_every);
  if (params.mode == NumericMode::ExactRational) {
    return replay_with<Rational>(params, x0, choices, record_every);
  }
  return replay_with<double>(params, x0, choices, record_every);
}

void write_replay_line(std::ostream& os, const SubsetChoice& choice) {
  os << choice.to_string() << '\n';
}

std::vector<SubsetChoice> read_replay_log(std::istream& is, std::size_t n, std::size_t k) {
  detail::check_subset_domain(n, k);
  std::vector<SubsetChoice> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::size_t> idx;
    long long v = 0;
    while (fields >> v) {
      if (v < 1 || static_cast<std::size_t>(v) > n) {
        throw DomainError("replay line " + std::to_string(line_no) + ": index " + std::to_string(v) +
                          " outside [1, " + std::to_string(n) + "]");
      }
      idx.push_back(static_cast<std::size_t>(v));
    }
    if (!fields.eof()) {
      throw DomainError("replay line " + std::to_string(line_no) + ": not an integer list");
    }
    if (idx.size() != k) {
      throw DomainError("replay line " + std::to_string(line_no) + ": expected " + std::to_string(k) +
                        " indices, found " + std::to_string(idx.size()));
    }
    if (!std::is_sorted(idx.begin(), idx.end())) {
      throw DomainError("replay line " + std::to_string(line_no) + ": indices must be ascending");
    }
    out.push_back(SubsetChoice::from_one_based(idx));
  }
  return out;
}

}  // namespace kavg
