#include "l1pred/uniform_closed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "l1pred/errors.hpp"
#include "l1pred/quadrature.hpp"
#include "l1pred/risk_engine.hpp"
#include "l1pred/special.hpp"

namespace l1pred {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_scale(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale factor c must be positive and finite");
}

// Integral of g(t) f(t) over [a, b] clipped to the support of the law.
double expect_on(const AbsLaw& law, const std::function<double(double)>& g, double a, double b,
                 std::vector<double> extra_breaks = {}) {
  a = std::max(a, 0.0);
  b = std::min(b, law.upper);
  if (!(b > a)) return 0.0;
  std::vector<double> breaks{a};
  for (double k : law.kinks) breaks.push_back(k);
  for (double k : extra_breaks) breaks.push_back(k);
  if (std::isinf(b)) {
    // keep a finite anchor before the infinite tail
    breaks.push_back(std::max(a, 1.0) * 4.0);
  }
  std::vector<double> inner;
  for (double k : breaks) {
    if (k > a && k < b) inner.push_back(k);
  }
  std::sort(inner.begin(), inner.end());
  std::vector<double> pts{a};
  pts.insert(pts.end(), inner.begin(), inner.end());
  pts.push_back(b);
  auto f = [&](double t) {
    const double w = law.pdf(t);
    return w == 0.0 ? 0.0 : w * g(t);
  };
  return quad::adaptive_pieces(f, pts, 1e-13);
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

}  // namespace

AbsLaw AbsLaw::from_model(const RadialModel& model) {
  AbsLaw law;
  law.pdf = [model](double r) { return r < 0.0 ? 0.0 : model.norm_pdf(r); };
  law.cdf = [model](double r) { return model.norm_cdf(r); };
  law.upper = model.support_radius();
  return law;
}

AbsLaw AbsLaw::uniform(double half_width) {
  if (!(half_width > 0.0)) throw ConfigError("uniform half-width must be positive");
  const double a = half_width;
  AbsLaw law;
  law.pdf = [a](double s) { return s >= 0.0 && s < a ? 1.0 / a : 0.0; };
  law.cdf = [a](double s) { return std::clamp(s / a, 0.0, 1.0); };
  law.upper = a;
  return law;
}

AbsLaw AbsLaw::midrange(int n, double half_width) {
  if (n < 1) throw ConfigError("sample size must be positive");
  if (!(half_width > 0.0)) throw ConfigError("uniform half-width must be positive");
  const double a = half_width;
  AbsLaw law;
  law.pdf = [n, a](double s) { return s >= 0.0 && s < a ? n * std::pow(1.0 - s / a, n - 1) / a : 0.0; };
  law.cdf = [n, a](double s) { return s <= 0.0 ? 0.0 : s >= a ? 1.0 : 1.0 - std::pow(1.0 - s / a, n); };
  law.upper = a;
  return law;
}

AbsLaw AbsLaw::scaled(double factor) const {
  if (!(factor > 0.0)) throw ConfigError("scale factor must be positive");
  AbsLaw law;
  auto pdf0 = pdf;
  auto cdf0 = cdf;
  law.pdf = [pdf0, factor](double s) { return factor * pdf0(factor * s); };
  law.cdf = [cdf0, factor](double s) { return cdf0(factor * s); };
  law.upper = upper / factor;
  for (double k : kinks) law.kinks.push_back(k / factor);
  return law;
}

double univariate_uniform_risk(const AbsLaw& abs_x, double c) {
  require_positive_scale(c);
  auto t = [](double s) { return s; };
  double risk;
  if (c < 1.0) {
    risk = 2.0 + (1.0 - c) * abs_x.cdf(1.0 - c) - (1.0 + c) * abs_x.cdf(1.0 + c) + expect_on(abs_x, t, 1.0 - c, 1.0 + c);
  } else {
    risk = 2.0 + (1.0 - 1.0 / c) * abs_x.cdf(c - 1.0) - (1.0 + 1.0 / c) * abs_x.cdf(c + 1.0) +
           expect_on(abs_x, t, c - 1.0, c + 1.0) / c;
  }
  return std::clamp(risk, 0.0, 2.0);
}

double univariate_uniform_risk(const AbsLaw& abs_x, double c, double B) {
  if (!(B > 0.0)) throw ConfigError("half-width B must be positive");
  return univariate_uniform_risk(B == 1.0 ? abs_x : abs_x.scaled(B), c);
}

double ball_intersection_volume(int d, double x_norm, double c) {
  if (d < 2) throw DomainError("ball intersection volume is defined here for d >= 2");
  require_positive_scale(c);
  if (!(x_norm > 0.0)) throw DomainError("centers must differ; use min(V(1), V(c)) for concentric balls");
  const double v1 = special::ball_volume(d, 1.0);
  const double a = 0.5 * x_norm + (1.0 - c * c) / (2.0 * x_norm);
  const double b = -0.5 * x_norm / c + (1.0 - c * c) / (2.0 * c * x_norm);
  const double vol = v1 * (1.0 - special::ball_marginal_cdf(d, a) + std::pow(c, d) * special::ball_marginal_cdf(d, b));
  return std::clamp(vol, 0.0, std::min(v1, special::ball_volume(d, c)));
}

double multivariate_uniform_risk(const AbsLaw& abs_x, int d, double c) {
  if (d < 2) throw DomainError("multivariate uniform risk needs d >= 2; use the univariate formula for d = 1");
  require_positive_scale(c);
  const double cd = std::pow(c, d);
  auto bracket = [&](double x) {
    if (!(x > 0.0)) return c < 1.0 ? 1.0 : c > 1.0 ? cd : 1.0;
    const double u = 0.5 * x - (c * c - 1.0) / (2.0 * x);
    const double v = 0.5 * x / c + (c * c - 1.0) / (2.0 * c * x);
    return special::ball_marginal_cdf(d, u) + cd * special::ball_marginal_cdf(d, v);
  };
  const double e = expect_on(abs_x, bracket, 0.0, abs_x.upper, {std::abs(1.0 - c), 1.0 + c});
  const double risk = c <= 1.0 ? 2.0 * (e - cd) : 2.0 * (e - 1.0) / cd;
  return std::clamp(risk, 0.0, 2.0);
}

double multivariate_uniform_risk(const AbsLaw& abs_x, int d, double c, double m) {
  if (!(m > 0.0)) throw ConfigError("ball radius m must be positive");
  return multivariate_uniform_risk(m == 1.0 ? abs_x : abs_x.scaled(m), d, c);
}

double uniform_d3_closed_risk(double c) {
  require_positive_scale(c);
  if (c < 1.0) {
    const double c3 = c * c * c;
    return (-c3 * c3 + 18.0 * c3 * c - 32.0 * c3 + 32.0) / 16.0;
  }
  if (c <= 2.0) return c * (18.0 - c * c) / 16.0;
  return 2.0 * (1.0 - 1.0 / (c * c * c));
}

double normal_R1_hypergeometric(int d, double r) {
  if (d < 1) throw ConfigError("dimension must be positive");
  if (!(r > 0.25)) {
    throw DomainError("hypergeometric form needs r > 1/4 so that |-1/(4r)| < 1, got r = " + fmt(r) +
                      "; use the radial quadrature instead");
  }
  const double lead = std::exp(std::lgamma(0.5 * (d + 1)) - std::lgamma(0.5 * d)) * std::sqrt(4.0 / (r * std::numbers::pi));
  return lead * special::hyp2f1(0.5 * (d + 1), 0.5, 1.5, -1.0 / (4.0 * r));
}

double normal_R1(int d, double r) {
  if (!(r > 0.0)) throw ConfigError("variance ratio r must be positive");
  if (r > 0.3) return normal_R1_hypergeometric(d, r);
  return plugin_risk_R1(RadialModel::normal(d, 1.0), RadialModel::normal(d, r));
}

PlugInOptimalityCheck check_plugin_optimality(const AbsLaw& abs_x, int grid_points) {
  if (grid_points < 10) throw ConfigError("condition grid needs at least 10 points");
  constexpr double kTol = 1e-9;
  PlugInOptimalityCheck out{ConditionStatus::undetermined, ConditionStatus::undetermined, 0.0};

  double span = abs_x.upper;
  if (std::isinf(span)) {
    span = 1.0;
    while (abs_x.cdf(span) < 1.0 - 1e-12 && span < 1e6) span *= 2.0;
  }

  const double mass = abs_x.cdf(2.0);
  bool shifted_ok = true;
  bool monotone_ok = true;
  double prev = kInf;
  for (int i = 0; i < grid_points; ++i) {
    const double s = span * (i + 0.5) / grid_points;
    const double fs = abs_x.pdf(s);
    if (fs + kTol < abs_x.pdf(s + 2.0)) shifted_ok = false;
    if (fs > prev + kTol) monotone_ok = false;
    prev = fs;
  }
  out.monotone_density = monotone_ok ? ConditionStatus::holds : ConditionStatus::fails;
  if (mass > 0.0) {
    out.conditional_mean = expect_on(abs_x, [](double t) { return t; }, 0.0, 2.0) / mass;
    if (!shifted_ok || out.conditional_mean > 1.0 + kTol) {
      out.mean_condition = ConditionStatus::fails;
    } else if (out.conditional_mean > 1.0 - kTol) {
      out.mean_condition = ConditionStatus::undetermined;
    } else {
      out.mean_condition = ConditionStatus::holds;
    }
  } else {
    out.mean_condition = shifted_ok ? ConditionStatus::undetermined : ConditionStatus::fails;
  }
  return out;
}

IntervalDensity bayes_uniform_predictive(std::span<const double> sample, double A, double B) {
  if (sample.empty()) throw ConfigError("sample must contain at least one value");
  if (!(A > 0.0) || !(B > 0.0)) throw ConfigError("half-widths A and B must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("sample values must be finite");
  const double range = hi - lo;
  if (range > 2.0 * A * (1.0 + 1e-12)) {
    throw DomainError("inconsistent data: sample range " + fmt(range) + " exceeds 2A = " + fmt(2.0 * A));
  }
  if (range < 2.0 * A - 4.0 * B) {
    throw DomainError("no valid posterior-median density: B < A/2 and sample range " + fmt(range) +
                      " < 2A - 4B = " + fmt(2.0 * A - 4.0 * B) + ", so the posterior median of q(y) is 0 for every y");
  }
  return {0.5 * (lo + hi), B};
}

}  // namespace l1pred
