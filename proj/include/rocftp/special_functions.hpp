#pragma once

#include <cmath>

namespace rocftp::special {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
inline double normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF via erfc (full double precision in both tails).
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

/// Inverse of the standard normal CDF (Wichura's AS 241, PPND16 variant).
/// Relative accuracy about 1e-15 on (0,1); p must lie strictly inside (0,1).
double inverse_normal_cdf(double p);

/// log of the Beta function.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a,b), continued fraction (modified
/// Lentz), relative tolerance 1e-12. Requires a,b > 0; x is clamped
/// to [0,1].
double regularized_incomplete_beta(double a, double b, double x);

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
/// truncated at 100 terms.
double kolmogorov_survival(double lambda);

}  // namespace rocftp::special
