#include "rocftp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rocftp/special_functions.hpp"

namespace rocftp {

namespace {

double type7_quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SixNumberSummary summary_stats(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("summary_stats: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double mean =
      std::accumulate(sorted.begin(), sorted.end(), 0.0) /
      static_cast<double>(sorted.size());
  return SixNumberSummary{sorted.front(), type7_quantile(sorted, 0.25),
                          type7_quantile(sorted, 0.5), mean,
                          type7_quantile(sorted, 0.75), sorted.back()};
}

KsResult ks_statistic(std::span<const double> samples,
                      const std::function<double(double)>& cdf) {
  if (samples.empty())
    throw std::invalid_argument("ks_statistic: empty input");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double up = static_cast<double>(i + 1) / n - f;
    const double down = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(up, down));
  }
  return KsResult{d, special::kolmogorov_survival(std::sqrt(n) * d)};
}

KsResult ks_statistic(std::span<const double> samples, const Target& target) {
  return ks_statistic(samples, [&](double x) { return target.cdf(x); });
}

QqOutliers qq_outliers(std::span<const double> samples, const Target& target,
                       double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("qq_outliers: delta must be > 0");
  QqOutliers out;
  if (samples.empty()) return out;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double q = target.quantile((static_cast<double>(i) + 0.5) / n);
    if (std::fabs(sorted[i] - q) > delta) {
      ++out.count;
      out.indices.push_back(i);
    }
  }
  return out;
}

}  // namespace rocftp
