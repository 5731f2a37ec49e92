#include "kavg/metrics.hpp"

#include <cmath>
#include <string>

namespace kavg {

double tau(std::size_t n, std::size_t k) {
  detail::check_subset_domain(n, k);
  return 1.0 - static_cast<double>(k - 1) / static_cast<double>(n - 1);
}

Rational tau_exact(std::size_t n, std::size_t k) {
  detail::check_subset_domain(n, k);
  return Rational(static_cast<long>(n - k), static_cast<long>(n - 1));
}

double predicted_l2(double s0, std::uint64_t l, std::size_t n, std::size_t k) {
  if (l == 0) return s0;
  return std::pow(tau(n, k), static_cast<double>(l)) * s0;
}

double martingale_ratio(double s, std::uint64_t l, std::size_t n, std::size_t k) {
  const double t = tau(n, k);
  if (l == 0) return s;
  if (t == 0.0) {
    if (s != 0.0) throw DomainError("tau^l = 0 with nonzero energy S = " + std::to_string(s));
    return 0.0;
  }
  if (s == 0.0) return 0.0;
  const double denom = std::pow(t, static_cast<double>(l));
  if (denom > 1e-290) return s / denom;
  // tau^l underflows long before S/tau^l does; divide in log space.
  return std::exp(std::log(s) - static_cast<double>(l) * std::log(t));
}

Rational martingale_ratio_exact(const Rational& s, std::uint64_t l, std::size_t n, std::size_t k) {
  const Rational t = tau_exact(n, k);
  if (l == 0) return s;
  if (t == 0) {
    if (s != 0) throw DomainError("tau^l = 0 with nonzero energy");
    return Rational(0);
  }
  Rational denom(1);
  for (std::uint64_t i = 0; i < l; ++i) denom *= t;
  return s / denom;
}

}  // namespace kavg
