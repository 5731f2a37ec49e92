#include "kavg/oracle.hpp"

#include <string>

namespace kavg::oracle {
namespace {

void check_enumeration_scale(std::size_t n, std::size_t k) {
  detail::check_subset_domain(n, k);
  if (n > kMaxEnumerationN) {
    throw ScaleError("subset enumeration is limited to n <= " + std::to_string(kMaxEnumerationN) +
                     " (got " + std::to_string(n) + ")");
  }
}

Rational expected_after(const RationalVector& x, const std::vector<SubsetChoice>& subsets,
                        std::uint64_t depth) {
  if (depth == 0) return centered_energy(x);
  // Sum in enumeration order so the reduction is reproducible.
  Rational total(0);
  for (const auto& s : subsets) total += expected_after(average_subset(x, s), subsets, depth - 1);
  return total / Rational(static_cast<long>(subsets.size()));
}

}  // namespace

std::vector<SubsetChoice> enumerate_k_subsets(std::size_t n, std::size_t k) {
  check_enumeration_scale(n, k);
  std::vector<SubsetChoice> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(SubsetChoice::from_zero_based(idx));
    // Advance the rightmost position that still has room.
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

RationalVector centered(const RationalVector& x) {
  if (x.empty()) throw DomainError("empty vector");
  Rational total(0);
  for (const auto& v : x) total += v;
  const Rational mean = total / Rational(static_cast<long>(x.size()));
  RationalVector out(x);
  for (auto& v : out) v -= mean;
  return out;
}

Rational centered_energy(const RationalVector& x) {
  Rational s(0);
  for (const auto& v : centered(x)) s += v * v;
  return s;
}

RationalVector average_subset(RationalVector x, const SubsetChoice& choice) {
  Rational total(0);
  for (auto i : choice.indices()) {
    if (i >= x.size()) throw DomainError("subset index out of range");
    total += x[i];
  }
  const Rational mean = total / Rational(static_cast<long>(choice.size()));
  for (auto i : choice.indices()) x[i] = mean;
  return x;
}

Rational exact_one_step_l2_expectation(const RationalVector& x, std::size_t k) {
  check_enumeration_scale(x.size(), k);
  return expected_after(centered(x), enumerate_k_subsets(x.size(), k), 1);
}

Rational exact_l_step_l2_expectation(const RationalVector& x, std::size_t k, std::uint64_t l) {
  detail::check_subset_domain(x.size(), k);
  if (x.size() > kMaxMultiStepN || l > kMaxMultiStepDepth) {
    throw ScaleError("multi-step enumeration is limited to n <= " + std::to_string(kMaxMultiStepN) +
                     ", l <= " + std::to_string(kMaxMultiStepDepth));
  }
  return expected_after(centered(x), enumerate_k_subsets(x.size(), k), l);
}

Prop1Report verify_prop1(std::size_t n, std::size_t k, const RationalVector& x0) {
  check_enumeration_scale(n, k);
  if (x0.size() != n) throw DomainError("x0 length does not match n");
  Prop1Report report;
  report.n = n;
  report.k = k;
  report.lhs = exact_one_step_l2_expectation(x0, k);
  // tau = 1 - (k-1)/(n-1), built here rather than borrowed from metrics.
  const Rational contraction = Rational(1) - Rational(static_cast<long>(k - 1), static_cast<long>(n - 1));
  report.rhs = contraction * centered_energy(x0);
  report.pass = report.lhs == report.rhs;
  return report;
}

RationalVector from_integers(const std::vector<long>& values) {
  RationalVector out;
  out.reserve(values.size());
  for (long v : values) out.emplace_back(v);
  return out;
}

}  // namespace kavg::oracle
