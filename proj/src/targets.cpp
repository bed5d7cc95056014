#include "rocftp/targets.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rocftp/report_io.hpp"

namespace rocftp {

namespace {

constexpr double kWeightSumTol = 1e-9;
constexpr double kNormalTailSds = 12.0;  // tail mass < 1e-32
constexpr double kQuantileTol = 1e-10;

void validate_component(const Component& c) {
  if (const auto* n = std::get_if<NormalComponent>(&c)) {
    if (!(n->sd > 0.0))
      throw std::invalid_argument("Normal component requires sd > 0");
    if (!std::isfinite(n->mean) || !std::isfinite(n->sd))
      throw std::invalid_argument("Normal component parameters must be finite");
  } else if (const auto* u = std::get_if<UniformComponent>(&c)) {
    if (!(u->lo < u->hi))
      throw std::invalid_argument("Uniform component requires a < b");
    if (!std::isfinite(u->lo) || !std::isfinite(u->hi))
      throw std::invalid_argument("Uniform component bounds must be finite");
  } else if (const auto* b = std::get_if<BetaComponent>(&c)) {
    if (!(b->alpha > 0.0) || !(b->beta > 0.0))
      throw std::invalid_argument("Beta component requires alpha, beta > 0");
  }
}

std::pair<double, double> component_support(const Component& c) {
  if (const auto* n = std::get_if<NormalComponent>(&c))
    return {n->mean - kNormalTailSds * n->sd, n->mean + kNormalTailSds * n->sd};
  if (const auto* u = std::get_if<UniformComponent>(&c)) return {u->lo, u->hi};
  return {0.0, 1.0};
}

}  // namespace

Target::Target(std::vector<Component> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty())
    throw std::invalid_argument("Target requires at least one component");
  if (components_.size() != weights_.size())
    throw std::invalid_argument("Target: component/weight count mismatch");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || w > 1.0)
      throw std::invalid_argument("Target: weights must lie in (0,1]");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kWeightSumTol)
    throw std::invalid_argument("Target: weights sum to " +
                                io::format_double(sum) + ", expected 1");
  support_lo_ = std::numeric_limits<double>::infinity();
  support_hi_ = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    validate_component(components_[i]);
    const auto [lo, hi] = component_support(components_[i]);
    support_lo_ = std::min(support_lo_, lo);
    support_hi_ = std::max(support_hi_, hi);
    const double w = weights_[i];
    Flat f{};
    f.w = w;
    if (const auto* n = std::get_if<NormalComponent>(&components_[i])) {
      f.kind = kNormal;
      f.p0 = n->mean;
      f.p1 = n->sd;
      f.c0 = w * special::kInvSqrt2Pi / n->sd;
      f.c1 = -0.5 / (n->sd * n->sd);
    } else if (const auto* u = std::get_if<UniformComponent>(&components_[i])) {
      f.kind = kUniform;
      f.p0 = u->lo;
      f.p1 = u->hi;
      f.c0 = w / (u->hi - u->lo);
    } else {
      const auto& b = std::get<BetaComponent>(components_[i]);
      f.kind = kBeta;
      f.p0 = b.alpha;
      f.p1 = b.beta;
      f.c0 = std::log(w) - special::log_beta(b.alpha, b.beta);
    }
    flat_.push_back(f);
  }
}

Target::Target(Component single)
    : Target(std::vector<Component>{std::move(single)},
             std::vector<double>{1.0}) {}

double Target::cdf(double x) const {
  double sum = 0.0;
  for (const Flat& f : flat_) {
    switch (f.kind) {
      case kNormal:
        sum += f.w * special::normal_cdf((x - f.p0) / f.p1);
        break;
      case kUniform:
        if (x >= f.p1)
          sum += f.w;
        else if (x > f.p0)
          sum += f.w * (x - f.p0) / (f.p1 - f.p0);
        break;
      case kBeta:
        sum += f.w * special::regularized_incomplete_beta(f.p0, f.p1, x);
        break;
    }
  }
  return std::min(1.0, std::max(0.0, sum));
}

double Target::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile: p must be in (0,1)");
  double lo = support_lo_;
  double hi = support_hi_;
  double width = hi - lo;
  while (cdf(lo) > p) {
    lo -= width;
    width *= 2.0;
  }
  while (cdf(hi) < p) {
    hi += width;
    width *= 2.0;
  }
  while (hi - lo > kQuantileTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // double resolution exhausted
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string Target::str() const {
  std::string out;
  const bool single_unit =
      components_.size() == 1 && weights_[0] == 1.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i > 0) out += "+";
    if (!single_unit) {
      out += io::format_double(weights_[i]);
      out += "*";
    }
    const Component& c = components_[i];
    if (const auto* n = std::get_if<NormalComponent>(&c)) {
      out += "N(" + io::format_double(n->mean) + "," +
             io::format_double(n->sd) + ")";
    } else if (const auto* u = std::get_if<UniformComponent>(&c)) {
      out += "U(" + io::format_double(u->lo) + "," +
             io::format_double(u->hi) + ")";
    } else {
      const auto& b = std::get<BetaComponent>(c);
      out += "Beta(" + io::format_double(b.alpha) + "," +
             io::format_double(b.beta) + ")";
    }
  }
  return out;
}

namespace {

// Recursive-descent parser over the mixture grammar. Tracks a byte
// offset for error reporting.
class TargetParser {
public:
  explicit TargetParser(std::string_view text) : text_(text) {}

  Target parse() {
    std::vector<Component> comps;
    std::vector<double> weights;
    bool any_explicit_weight = false;
    for (;;) {
      skip_ws();
      const std::size_t term_pos = pos_;
      auto [comp, weight, explicit_w] = parse_term();
      any_explicit_weight |= explicit_w;
      try {
        validate_component(comp);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), term_pos);
      }
      comps.push_back(comp);
      weights.push_back(weight);
      skip_ws();
      if (pos_ >= text_.size()) break;
      if (text_[pos_] != '+')
        throw ParseError("expected '+' between mixture terms", pos_);
      ++pos_;
    }
    if (comps.size() == 1 && !any_explicit_weight) weights[0] = 1.0;
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::fabs(sum - 1.0) > kWeightSumTol)
      throw ParseError("weights sum to " + io::format_double(sum) +
                           ", expected 1",
                       0);
    return Target(std::move(comps), std::move(weights));
  }

private:
  struct Term {
    Component comp;
    double weight;
    bool explicit_weight;
  };

  Term parse_term() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    double weight = 1.0;
    bool explicit_w = false;
    // A leading number is a weight only when followed by '*'.
    if (looks_like_number()) {
      const std::size_t wpos = pos_;
      weight = parse_number();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '*')
        throw ParseError("expected '*' after mixture weight", pos_);
      if (!(weight > 0.0) || weight > 1.0)
        throw ParseError("weight must lie in (0,1]", wpos);
      ++pos_;
      explicit_w = true;
      skip_ws();
    }
    return {parse_dist(), weight, explicit_w};
  }

  Component parse_dist() {
    skip_ws();
    if (consume("N(")) {
      const double mean = parse_number();
      expect(',');
      const double sd = parse_number();
      expect(')');
      return NormalComponent{mean, sd};
    }
    if (consume("U(")) {
      const double lo = parse_number();
      expect(',');
      const double hi = parse_number();
      expect(')');
      return UniformComponent{lo, hi};
    }
    if (consume("Beta(")) {
      const double alpha = parse_number();
      expect(',');
      const double beta = parse_number();
      expect(')');
      return BetaComponent{alpha, beta};
    }
    throw ParseError("expected N(...), U(...) or Beta(...)", pos_);
  }

  bool looks_like_number() const {
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+';
  }

  double parse_number() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("expected a number", pos_);
    const std::string buf(text_.substr(pos_, 64));
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str()) throw ParseError("expected a number", pos_);
    if (!std::isfinite(v)) throw ParseError("number out of range", pos_);
    pos_ += static_cast<std::size_t>(end - buf.c_str());
    return v;
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Target parse_target(std::string_view text) { return TargetParser(text).parse(); }

MirResult most_interest_range(const Target& target, double epsilon,
                              std::size_t resolution) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("most_interest_range: epsilon must be in (0,1)");
  if (resolution < 1000)
    throw std::invalid_argument(
        "most_interest_range: resolution must be at least 1000");

  const auto [lo, hi] = target.working_support();
  const double h = (hi - lo) / static_cast<double>(resolution);
  std::vector<double> dens(resolution);
  for (std::size_t i = 0; i < resolution; ++i)
    dens[i] = target.density(lo + (static_cast<double>(i) + 0.5) * h);

  // Highest density first; exact ties resolved left to right so flat
  // regions produce a reproducible set.
  std::vector<std::size_t> order(resolution);
  for (std::size_t i = 0; i < resolution; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dens[a] != dens[b]) return dens[a] > dens[b];
    return a < b;
  });

  const double need = 1.0 - epsilon;
  double mass = 0.0;
  double level = 0.0;
  std::vector<char> included(resolution, 0);
  for (std::size_t k = 0; k < resolution; ++k) {
    const std::size_t i = order[k];
    included[i] = 1;
    mass += dens[i] * h;
    level = dens[i];
    if (mass >= need) break;
  }

  MirResult out;
  out.epsilon = epsilon;
  out.level = level;
  out.mass = mass;
  for (std::size_t i = 0; i < resolution;) {
    if (!included[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < resolution && included[j + 1]) ++j;
    out.intervals.emplace_back(lo + static_cast<double>(i) * h,
                               lo + static_cast<double>(j + 1) * h);
    i = j + 1;
  }
  if (out.intervals.empty())
    throw std::runtime_error("most_interest_range: empty level set");
  out.hull_lo = out.intervals.front().first;
  out.hull_hi = out.intervals.back().second;
  return out;
}

namespace {

std::vector<BuiltinCase> make_builtin_cases() {
  std::vector<BuiltinCase> cases;
  cases.push_back({"case1", Target(NormalComponent{0.0, 1.0}), -10.0, 10.0,
                   1.0, 29});
  cases.push_back({"case2", Target(NormalComponent{30.0, 1.0}), 20.0, 40.0,
                   1.0, 29});
  cases.push_back({"case3",
                   Target({NormalComponent{-2.0, 1.0}, NormalComponent{2.0, 1.0}},
                          {0.8, 0.2}),
                   -10.0, 10.0, 1.0, 38});
  cases.push_back({"case4",
                   Target({NormalComponent{-5.0, 1.0}, NormalComponent{5.0, 1.0},
                           NormalComponent{15.0, 1.0}},
                          {0.2, 0.2, 0.6}),
                   -15.0, 25.0, 3.5, 116});
  cases.push_back({"case5",
                   Target({UniformComponent{-100.0, 100.0},
                           BetaComponent{50.0, 50.0}},
                          {0.8, 0.2}),
                   -100.0, 100.0, 3.5, std::nullopt});
  cases.push_back({"case6",
                   Target({UniformComponent{-100.0, 100.0},
                           BetaComponent{500.0, 500.0}},
                          {0.9, 0.1}),
                   -100.0, 100.0, 0.1, std::nullopt});
  return cases;
}

}  // namespace

const BuiltinCase* find_builtin_case(std::string_view name) {
  static const std::vector<BuiltinCase> cases = make_builtin_cases();
  for (const BuiltinCase& c : cases)
    if (c.name == name) return &c;
  return nullptr;
}

Target resolve_target(std::string_view spec) {
  if (const BuiltinCase* c = find_builtin_case(spec)) return c->target;
  return parse_target(spec);
}

}  // namespace rocftp
