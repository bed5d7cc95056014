#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rocftp/targets.hpp"

namespace rocftp {

struct SixNumberSummary {
  double min;
  double q1;
  double median;
  double mean;
  double q3;
  double max;
};

/// Quartiles by linear interpolation of order statistics (the type-7
/// convention). Throws on empty input.
SixNumberSummary summary_stats(std::span<const double> values);

struct KsResult {
  double d;        // sup-distance statistic
  double p_value;  // asymptotic Kolmogorov series
};

/// One-sample Kolmogorov-Smirnov test of the samples against a CDF.
/// D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n); the p-value uses the
/// asymptotic Kolmogorov distribution at sqrt(n) * D.
KsResult ks_statistic(std::span<const double> samples,
                      const std::function<double(double)>& cdf);
KsResult ks_statistic(std::span<const double> samples, const Target& target);

struct QqOutliers {
  std::size_t count = 0;
  std::vector<std::size_t> indices;  // positions in the sorted sample
};

/// Sorted-sample positions whose absolute deviation from the theoretical
/// quantile at (i - 0.5)/n exceeds delta.
QqOutliers qq_outliers(std::span<const double> samples, const Target& target,
                       double delta);

}  // namespace rocftp
