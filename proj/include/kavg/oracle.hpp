#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kavg/chain.hpp"
#include "kavg/rational.hpp"

// Brute-force checks of the one-step energy contraction. Everything here is
// exact and deliberately independent of AveragingState: vectors are plain
// std::vector<Rational> and the averaging is re-implemented locally.
namespace kavg::oracle {

using RationalVector = std::vector<Rational>;

inline constexpr std::size_t kMaxEnumerationN = 12;
inline constexpr std::size_t kMaxMultiStepN = 6;
inline constexpr std::uint64_t kMaxMultiStepDepth = 3;

/// All C(n,k) subsets in lexicographic order. ScaleError if n > 12.
std::vector<SubsetChoice> enumerate_k_subsets(std::size_t n, std::size_t k);

RationalVector centered(const RationalVector& x);
/// sum_i (x_i - mean(x))^2
Rational centered_energy(const RationalVector& x);
RationalVector average_subset(RationalVector x, const SubsetChoice& choice);

/// E[S(1)] from x, averaged over every subset.
Rational exact_one_step_l2_expectation(const RationalVector& x, std::size_t k);

/// E[S(l)] from x by recursion over all C(n,k)^l subset sequences.
Rational exact_l_step_l2_expectation(const RationalVector& x, std::size_t k, std::uint64_t l);

struct Prop1Report {
  std::size_t n = 0;
  std::size_t k = 0;
  Rational lhs;  // enumerated E[S(1)]
  Rational rhs;  // tau * S(0)
  bool pass = false;
};

Prop1Report verify_prop1(std::size_t n, std::size_t k, const RationalVector& x0);

RationalVector from_integers(const std::vector<long>& values);

}  // namespace kavg::oracle
