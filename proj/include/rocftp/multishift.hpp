#pragma once

#include <cmath>

#include "rocftp/rng.hpp"

namespace rocftp {

// One randomness packet of the layered normal multishift coupler. The
// packet defines the piecewise-constant mapping
//   M(s) = floor((s + R - X) / (R - L)) * (R - L) + X
// with R = halfwidth, L = -halfwidth, X = offset, all scaled by sigma.
// Applied to every chain simultaneously, M shifts each state by a
// N(0, sigma^2)-distributed amount while collapsing whole intervals of
// width 2R onto single points.
struct CouplerDraw {
  double halfwidth;  // >= 0
  double offset;     // |offset| <= halfwidth
  double scale;      // sigma > 0

  double width() const { return 2.0 * halfwidth; }
};

/// Builds a draw from three already-sampled unit variates: a standard
/// normal z, a strictly positive height fraction u01 in (0,1), and a
/// location fraction x01 in [0,1). Split out from draw_coupler so tests
/// can pin the randomness exactly.
inline CouplerDraw coupler_from_uniforms(double z, double u01, double x01,
                                         double sigma) {
  const double u = u01 * special::normal_pdf(z);  // Uniform(0, f(z)), u > 0
  const double r = std::sqrt(-2.0 * std::log(special::kSqrt2Pi * u));
  const double x = -r + x01 * (2.0 * r);
  return CouplerDraw{sigma * r, sigma * x, sigma};
}

/// Samples a coupler packet: Z ~ N(0,1), U ~ Uniform(0, f(Z)),
/// X ~ Uniform(-r, r) with r = f^{-1}(U). Consumes three u64 values
/// from the stream; degenerate draws (halfwidth < 1e-12, probability
/// numerically negligible) are redrawn.
inline CouplerDraw draw_coupler(RngStream& stream, double sigma) {
  for (;;) {
    const double z = stream.next_standard_normal();
    const double u01 = stream.next_open_uniform();
    const double x01 = stream.next_uniform();
    const CouplerDraw d = coupler_from_uniforms(z, u01, x01, sigma);
    if (d.halfwidth >= 1e-12 * sigma) return d;
  }
}

/// Applies the step-function mapping. Monotone nondecreasing in s,
/// shift-equivariant with period width(), and |apply_shift(s) - s| is
/// bounded by the halfwidth.
inline double apply_shift(const CouplerDraw& draw, double s) {
  const double w = draw.width();
  return std::floor((s + draw.halfwidth - draw.offset) / w) * w + draw.offset;
}

}  // namespace rocftp
