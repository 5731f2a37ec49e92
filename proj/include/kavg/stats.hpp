#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace kavg {

inline constexpr std::array<double, 5> kQuantileLevels{0.05, 0.25, 0.5, 0.75, 0.95};
inline constexpr double kZ975 = 1.959963984540054;

struct SummaryStats {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(r); 0 when r = 1
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  std::array<double, kQuantileLevels.size()> quantiles{};  // aligned with kQuantileLevels
  std::size_t r = 0;

  /// Looks up one of kQuantileLevels; DomainError for any other level.
  double quantile(double level) const;
};

/// Mean, standard error, normal-approximation 95% interval and nearest-rank
/// quantiles: the p-quantile is the ceil(p*r)-th smallest sample (rank at
/// least 1). DomainError on empty input.
SummaryStats summarize(std::span<const double> samples);

/// Nearest-rank quantile of already sorted samples.
double nearest_rank(std::span<const double> sorted, double level);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace kavg
