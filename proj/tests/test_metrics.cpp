#include "kavg/metrics.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "kavg/oracle.hpp"

namespace kavg {
namespace {

AveragingState<Rational> exact_state(std::initializer_list<Rational> v) {
  Vector<Rational> x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& e : v) x[i++] = e;
  return AveragingState<Rational>(x);
}

TEST(L1Deviation, Examples) {
  EXPECT_EQ(l1_deviation(exact_state({1, 0, 0, 0})), Rational(3, 2));
  EXPECT_EQ(l1_deviation(exact_state({5, 5, 5})), Rational(0));
  // (1/2, 1/2, 0) measured against an initial mean of 1/3: start from
  // (1, 0, 0) and average the first two coordinates.
  auto s = exact_state({1, 0, 0});
  s.average(SubsetChoice::from_zero_based({0, 1}));
  EXPECT_EQ(l1_deviation(s), Rational(2, 3));
}

TEST(L2Energy, Examples) {
  EXPECT_EQ(l2_energy(exact_state({1, 0, 0, 0})), Rational(3, 4));
  EXPECT_EQ(l2_energy(exact_state({-2, -2, -2, -2})), Rational(0));
  EXPECT_EQ(l2_energy(exact_state({Rational(2, 3), Rational(-1, 3), Rational(-1, 3)})), Rational(2, 3));
}

TEST(Metrics, FloatMatchesExact) {
  Vector<double> x(5);
  x << 0.25, -1.5, 3.0, 0.0, 2.0;
  AveragingState<double> s(x);
  EXPECT_DOUBLE_EQ(l1_deviation(s), 0.5 + 2.25 + 2.25 + 0.75 + 1.25);
  EXPECT_DOUBLE_EQ(l2_energy(s), 0.25 + 5.0625 + 5.0625 + 0.5625 + 1.5625);
}

TEST(Tau, Examples) {
  EXPECT_DOUBLE_EQ(tau(3, 2), 0.5);
  EXPECT_DOUBLE_EQ(tau(5, 3), 0.5);
  EXPECT_EQ(tau(7, 7), 0.0);
  EXPECT_EQ(tau(2, 2), 0.0);
  EXPECT_EQ(tau_exact(10, 4), Rational(2, 3));
  EXPECT_THROW(tau(5, 1), DomainError);
  EXPECT_THROW(tau(5, 6), DomainError);
}

TEST(PredictedL2, MatchesExactEnumeration) {
  const auto x = oracle::from_integers({1, 0, 0});
  EXPECT_DOUBLE_EQ(predicted_l2(2.0 / 3.0, 1, 3, 2), to_double(oracle::exact_one_step_l2_expectation(x, 2)));
  EXPECT_DOUBLE_EQ(predicted_l2(2.0 / 3.0, 2, 3, 2), to_double(oracle::exact_l_step_l2_expectation(x, 2, 2)));
  EXPECT_DOUBLE_EQ(predicted_l2(2.0 / 3.0, 1, 3, 2), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(predicted_l2(2.0 / 3.0, 2, 3, 2), 1.0 / 6.0);
  EXPECT_EQ(predicted_l2(1.234, 0, 9, 4), 1.234);
}

TEST(MartingaleRatio, Definition) {
  EXPECT_DOUBLE_EQ(martingale_ratio(0.25, 2, 3, 2), 1.0);
  EXPECT_EQ(martingale_ratio(0.7, 0, 3, 2), 0.7);
  EXPECT_EQ(martingale_ratio_exact(Rational(1, 4), 2, 3, 2), Rational(1));
}

TEST(MartingaleRatio, AbsorbedChainIsZeroByConvention) {
  EXPECT_EQ(martingale_ratio(0.0, 1, 4, 4), 0.0);
  EXPECT_EQ(martingale_ratio(0.0, 9, 2, 2), 0.0);
  EXPECT_EQ(martingale_ratio_exact(Rational(0), 3, 4, 4), Rational(0));
  EXPECT_THROW(martingale_ratio(0.1, 1, 4, 4), DomainError);
  EXPECT_THROW(martingale_ratio_exact(Rational(1, 10), 1, 4, 4), DomainError);
}

TEST(MartingaleRatio, SurvivesUnderflowOfTauPower) {
  // tau = 1/2, l = 1100: tau^l underflows to 0 in double but S / tau^l is
  // representable.
  const double s = std::ldexp(1.0, -1000);
  const double m = martingale_ratio(s, 1100, 3, 2);
  EXPECT_NEAR(m, std::ldexp(1.0, 100), 1e-9 * std::ldexp(1.0, 100));
}

TEST(Measure, ZeroFixedPoint) {
  auto s = exact_state({1, 2, 3, 4});
  EXPECT_GT(l1_deviation(s), 0);
  s.average(SubsetChoice::from_zero_based({0, 1, 2, 3}));
  const auto m = measure(s, 4);
  EXPECT_EQ(m.t_l1, 0.0);
  EXPECT_EQ(m.s_l2, 0.0);
  EXPECT_EQ(m.m_ratio, 0.0);
  EXPECT_EQ(m.l, 1u);
}

}  // namespace
}  // namespace kavg
