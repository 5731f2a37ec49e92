#include "kavg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kavg/errors.hpp"

namespace kavg {

double SummaryStats::quantile(double level) const {
  for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) {
    if (kQuantileLevels[i] == level) return quantiles[i];
  }
  throw DomainError("quantile level not tracked: " + std::to_string(level));
}

double nearest_rank(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const auto r = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(level * r));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

SummaryStats summarize(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("summarize needs at least one sample");
  SummaryStats out;
  out.r = samples.size();
  const auto r = static_cast<double>(out.r);

  double sum = 0.0;
  for (double v : samples) sum += v;
  out.mean = sum / r;

  if (out.r > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - out.mean) * (v - out.mean);
    out.std_error = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
  }
  out.ci95_lo = out.mean - kZ975 * out.std_error;
  out.ci95_hi = out.mean + kZ975 * out.std_error;

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) {
    out.quantiles[i] = nearest_rank(sorted, kQuantileLevels[i]);
  }
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace kavg
