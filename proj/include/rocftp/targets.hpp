#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rocftp/errors.hpp"
#include "rocftp/special_functions.hpp"

namespace rocftp {

struct NormalComponent {
  double mean;
  double sd;  // > 0
};

struct UniformComponent {
  double lo;
  double hi;  // lo < hi
};

struct BetaComponent {
  double alpha;  // > 0
  double beta;   // > 0; support [0,1]
};

using Component = std::variant<NormalComponent, UniformComponent, BetaComponent>;

/// A weighted mixture of Normal / Uniform / Beta components. Immutable
/// after construction; weights must sum to 1 within 1e-9.
class Target {
public:
  Target(std::vector<Component> components, std::vector<double> weights);
  explicit Target(Component single);

  /// Mixture density, 0 outside all supports. Beta components are
  /// evaluated in log space so sharp shapes like Beta(500,500) don't
  /// underflow.
  double density(double x) const {
    double sum = 0.0;
    for (const Flat& f : flat_) {
      switch (f.kind) {
        case kNormal:
          sum += f.c0 * std::exp(f.c1 * (x - f.p0) * (x - f.p0));
          break;
        case kUniform:
          if (x >= f.p0 && x <= f.p1) sum += f.c0;
          break;
        case kBeta:
          if (x > 0.0 && x < 1.0)
            sum += std::exp(f.c0 + (f.p0 - 1.0) * std::log(x) +
                            (f.p1 - 1.0) * std::log1p(-x));
          break;
      }
    }
    return sum;
  }

  double cdf(double x) const;

  /// Inverse CDF by bisection to absolute tolerance 1e-10; p in (0,1).
  double quantile(double p) const;

  /// Hull of the component supports, with unbounded (Normal) components
  /// truncated at mean +- 12 sd.
  std::pair<double, double> working_support() const {
    return {support_lo_, support_hi_};
  }

  const std::vector<Component>& components() const { return components_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Parseable text form; parse_target(str()) reproduces the target
  /// field-for-field.
  std::string str() const;

private:
  enum Kind { kNormal, kUniform, kBeta };
  struct Flat {
    Kind kind;
    double p0, p1;  // (mean, sd) | (lo, hi) | (alpha, beta)
    double w;
    double c0, c1;  // precomputed density constants
  };

  std::vector<Component> components_;
  std::vector<double> weights_;
  std::vector<Flat> flat_;
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
};

/// Parses the mixture grammar:
///   mixture := term { "+" term }
///   term    := [ weight "*" ] dist
///   dist    := "N(" num "," num ")" | "U(" num "," num ")" | "Beta(" num "," num ")"
/// Whitespace is insignificant; weights must sum to 1 within 1e-9.
/// Throws ParseError with the offending position.
Target parse_target(std::string_view text);

/// Smallest-measure region holding at least 1 - epsilon of the target
/// mass, computed on a uniform grid over the working support.
struct MirResult {
  double epsilon;
  double level;  // density threshold of the super-level set
  std::vector<std::pair<double, double>> intervals;  // disjoint, sorted
  double hull_lo;  // 0-hat
  double hull_hi;  // 1-hat
  double mass;
};

MirResult most_interest_range(const Target& target, double epsilon,
                              std::size_t resolution);

/// Built-in benchmark targets with their default ranges, proposal scales,
/// and (where calibrated) block lengths.
struct BuiltinCase {
  std::string name;
  Target target;
  double range_lo;
  double range_hi;
  double sigma;
  std::optional<int> block_length;
};

/// Looks up "case1".."case6"; nullptr when unknown.
const BuiltinCase* find_builtin_case(std::string_view name);

/// Parses either a built-in case name or a mixture expression.
Target resolve_target(std::string_view spec);

}  // namespace rocftp
