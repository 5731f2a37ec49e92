#pragma once

#include <cstddef>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "kavg/chain.hpp"
#include "kavg/rational.hpp"

namespace kavg {

/// One recorded row of a trajectory.
struct MetricsSample {
  std::uint64_t l = 0;
  double t_l1 = 0.0;    // T(l)
  double s_l2 = 0.0;    // S(l), centered
  double m_ratio = 0.0; // S(l) / tau^l

  friend bool operator==(const MetricsSample&, const MetricsSample&) = default;
};

namespace detail {
inline double abs_value(double x) { return x < 0 ? -x : x; }
inline Rational abs_value(const Rational& x) { return boost::multiprecision::abs(x); }
}  // namespace detail

// Both functionals are measured against the cached initial mean and summed in
// index order, so equal states always give bit-equal results.

/// T(l) = sum_i |x_{l,i} - mean(x_0)|
template <typename Scalar>
Scalar l1_deviation(const AveragingState<Scalar>& state) {
  const auto& x = state.values();
  Scalar total(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) total += detail::abs_value(x[i] - state.initial_mean());
  return total;
}

/// S(l) = sum_i (x_{l,i} - mean(x_0))^2
template <typename Scalar>
Scalar l2_energy(const AveragingState<Scalar>& state) {
  const auto& x = state.values();
  Scalar total(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar d = x[i] - state.initial_mean();
    total += d * d;
  }
  return total;
}

/// Contraction factor 1 - (k-1)/(n-1) of the expected energy per step.
double tau(std::size_t n, std::size_t k);
Rational tau_exact(std::size_t n, std::size_t k);

/// tau^l * s0
double predicted_l2(double s0, std::uint64_t l, std::size_t n, std::size_t k);

/// S / tau^l. When k = n the chain is absorbed after one step, tau^l = 0 for
/// l >= 1 and S is 0 as well; the ratio is defined as 0 there. Throws
/// DomainError if S > 0 in that case, since the state is then inconsistent.
double martingale_ratio(double s, std::uint64_t l, std::size_t n, std::size_t k);
Rational martingale_ratio_exact(const Rational& s, std::uint64_t l, std::size_t n, std::size_t k);

template <typename Scalar>
MetricsSample measure(const AveragingState<Scalar>& state, std::size_t k) {
  const Scalar t = l1_deviation(state);
  const Scalar s = l2_energy(state);
  MetricsSample out;
  out.l = state.step_count();
  out.t_l1 = to_double(t);
  out.s_l2 = to_double(s);
  if constexpr (std::is_same_v<Scalar, Rational>) {
    out.m_ratio = to_double(martingale_ratio_exact(s, out.l, state.size(), k));
  } else {
    out.m_ratio = martingale_ratio(s, out.l, state.size(), k);
  }
  return out;
}

}  // namespace kavg
