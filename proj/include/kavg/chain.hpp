#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kavg/errors.hpp"
#include "kavg/random.hpp"
#include "kavg/rational.hpp"

namespace kavg {

enum class NumericMode { Float64, ExactRational };

struct ChainParams {
  std::size_t n = 2;
  std::size_t k = 2;
  std::uint64_t seed = kDefaultSeed;
  NumericMode mode = NumericMode::Float64;
};

/// Throws DomainError unless 2 <= k <= n.
void validate(const ChainParams& params);

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// The k coordinates chosen at one step. Stored 0-based and strictly
/// increasing; text forms are 1-based.
class SubsetChoice {
 public:
  SubsetChoice() = default;

  /// Sorts the indices and rejects duplicates.
  static SubsetChoice from_zero_based(std::vector<std::size_t> indices);
  /// Same, for the 1-based indices used in logs and on the command line.
  static SubsetChoice from_one_based(std::span<const std::size_t> indices);

  std::span<const std::size_t> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::vector<std::size_t> one_based() const;
  /// "1 3 4"
  std::string to_string() const;

  friend bool operator==(const SubsetChoice&, const SubsetChoice&) = default;

 private:
  template <class Engine>
  friend void sample_k_subset(Engine& rng, std::size_t n, std::size_t k, SubsetChoice& out);

  std::vector<std::size_t> indices_;
};

namespace detail {
inline constexpr std::size_t kLinearScanLimit = 32;
void check_subset_domain(std::size_t n, std::size_t k);
}

/// Uniform k-subset of {0, ..., n-1} by Floyd's algorithm: for
/// j = n-k, ..., n-1 draw t uniform in [0, j] and keep t, or j if t is
/// already kept. Exactly k calls to bounded_uniform, bounds n-k+1 up to n, in
/// that order. Writes into `out` so a caller can reuse its buffer.
template <class Engine>
void sample_k_subset(Engine& rng, std::size_t n, std::size_t k, SubsetChoice& out) {
  using detail::kLinearScanLimit;
  detail::check_subset_domain(n, k);
  auto& picked = out.indices_;
  picked.clear();
  picked.reserve(k);
  if (k <= kLinearScanLimit) {
    for (std::size_t j = n - k; j < n; ++j) {
      const auto t = static_cast<std::size_t>(bounded_uniform(rng, j + 1));
      // Everything kept so far is < j, so j itself is never a duplicate.
      const bool seen = std::find(picked.begin(), picked.end(), t) != picked.end();
      picked.push_back(seen ? j : t);
    }
  } else {
    std::unordered_set<std::size_t> seen;
    seen.reserve(2 * k);
    for (std::size_t j = n - k; j < n; ++j) {
      const auto t = static_cast<std::size_t>(bounded_uniform(rng, j + 1));
      const std::size_t kept = seen.insert(t).second ? t : j;
      if (kept == j) seen.insert(j);
      picked.push_back(kept);
    }
  }
  std::sort(picked.begin(), picked.end());
}

template <class Engine>
SubsetChoice sample_k_subset(Engine& rng, std::size_t n, std::size_t k) {
  SubsetChoice choice;
  sample_k_subset(rng, n, k, choice);
  return choice;
}

/// The chain's state x_l together with the quantities fixed at l = 0.
template <typename Scalar>
class AveragingState {
 public:
  explicit AveragingState(Vector<Scalar> x0) : values_(std::move(x0)) {
    if (values_.size() < 2) throw DomainError("state needs at least two coordinates");
    Scalar total(0);
    for (Eigen::Index i = 0; i < values_.size(); ++i) total += values_[i];
    initial_mean_ = total / Scalar(static_cast<long>(values_.size()));
    initial_min_ = values_.minCoeff();
    initial_max_ = values_.maxCoeff();
  }

  const Vector<Scalar>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  const Scalar& initial_mean() const noexcept { return initial_mean_; }
  const Scalar& initial_min() const noexcept { return initial_min_; }
  const Scalar& initial_max() const noexcept { return initial_max_; }
  std::uint64_t step_count() const noexcept { return step_count_; }

  /// Replaces the chosen coordinates by their common mean.
  void average(const SubsetChoice& choice) {
    const auto idx = choice.indices();
    if (idx.empty()) throw DomainError("empty subset");
    if (idx.back() >= size()) {
      throw DomainError("subset index " + std::to_string(idx.back() + 1) +
                        " out of range for n = " + std::to_string(size()));
    }
    Scalar sum(0);
    for (auto i : idx) sum += values_[static_cast<Eigen::Index>(i)];
    Scalar mean = sum / Scalar(static_cast<long>(idx.size()));
    if constexpr (std::is_floating_point_v<Scalar>) {
      // The rounded mean can land one ulp outside the chosen values.
      Scalar lo = values_[static_cast<Eigen::Index>(idx.front())];
      Scalar hi = lo;
      for (auto i : idx) {
        lo = std::min(lo, values_[static_cast<Eigen::Index>(i)]);
        hi = std::max(hi, values_[static_cast<Eigen::Index>(i)]);
      }
      mean = std::clamp(mean, lo, hi);
    }
    for (auto i : idx) values_[static_cast<Eigen::Index>(i)] = mean;
    ++step_count_;
  }

 private:
  Vector<Scalar> values_;
  Scalar initial_mean_;
  Scalar initial_min_;
  Scalar initial_max_;
  std::uint64_t step_count_ = 0;
};

template <typename Scalar>
AveragingState<Scalar> apply_group_average(AveragingState<Scalar> state, const SubsetChoice& choice) {
  state.average(choice);
  return state;
}

/// One transition: sample a subset with `rng`, average it in place, and
/// return the subset for logging or replay.
template <typename Scalar, class Engine>
SubsetChoice step(AveragingState<Scalar>& state, Engine& rng, const ChainParams& params) {
  if (state.size() != params.n) {
    throw DomainError("state has " + std::to_string(state.size()) + " coordinates, params.n = " +
                      std::to_string(params.n));
  }
  SubsetChoice choice = sample_k_subset(rng, params.n, params.k);
  state.average(choice);
  return choice;
}

/// Convenience constructors for the usual starting vectors.
Vector<double> basis_vector(std::size_t n);
Vector<double> centered_basis_vector(std::size_t n);

template <typename Scalar>
Vector<Scalar> convert_vector(std::span<const double> x) {
  Vector<Scalar> out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<Eigen::Index>(i)] = Scalar(x[i]);
  return out;
}

}  // namespace kavg
