#include "l1pred/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "l1pred/errors.hpp"

namespace l1pred::special {

namespace {

void require_angle_dim(int d) {
  if (d < 2) {
    throw DomainError("cross-angle law needs d >= 2, got d = " + std::to_string(d));
  }
}

}  // namespace

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double regularized_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(a, x);
}

double cross_angle_pdf(int d, double v) {
  require_angle_dim(d);
  if (v < -1.0 || v > 1.0) return 0.0;
  const double s = 1.0 - v * v;
  if (d == 3) return 0.5;
  if (d == 2) {
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (std::numbers::pi * std::sqrt(s));
  }
  const double half = 0.5 * (d - 1);
  return std::exp((half - 1.0) * std::log(s) - log_beta(half, 0.5));
}

double cross_angle_cdf(int d, double v) {
  require_angle_dim(d);
  if (!(v > -1.0)) return 0.0;
  if (v >= 1.0) return 1.0;
  if (d == 2) return 0.5 + std::asin(v) / std::numbers::pi;
  if (d == 3) return 0.5 * (v + 1.0);
  // (1 + V)/2 ~ Beta((d-1)/2, (d-1)/2)
  const double half = 0.5 * (d - 1);
  return regularized_beta(half, half, 0.5 * (1.0 + v));
}

double ball_marginal_pdf(int d, double t) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (t <= -1.0 || t >= 1.0) return 0.0;
  const double log_norm =
      std::lgamma(0.5 * d + 1.0) - 0.5 * std::log(std::numbers::pi) - std::lgamma(0.5 * (d + 1));
  return std::exp(log_norm + 0.5 * (d - 1) * std::log1p(-t * t));
}

double ball_marginal_cdf(int d, double t) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (!(t > -1.0)) return 0.0;
  if (t >= 1.0) return 1.0;
  if (d == 1) return 0.5 * (t + 1.0);
  if (d == 3) return (3.0 * t - t * t * t + 2.0) / 4.0;
  // (1 + Y1)/2 ~ Beta((d+1)/2, (d+1)/2)
  const double half = 0.5 * (d + 1);
  return regularized_beta(half, half, 0.5 * (1.0 + t));
}

double hyp2f1(double a, double b, double c, double z) {
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream msg;
    msg << "2F1 power series converges only for |z| < 1, got z = " << z;
    throw DomainError(msg.str());
  }
  if (c <= 0.0 && c == std::floor(c)) {
    throw DomainError("2F1 undefined for nonpositive integer c");
  }
  constexpr int kMaxTerms = 10000;
  constexpr double kRelTol = 1e-15;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 0; j < kMaxTerms; ++j) {
    term *= (a + j) * (b + j) / ((c + j) * (j + 1.0)) * z;
    sum += term;
    if (std::abs(term) < kRelTol * std::abs(sum)) break;
  }
  return sum;
}

double std_normal_cdf(double u) {
  return 0.5 * std::erfc(-u / std::numbers::sqrt2);
}

double ball_volume(int d, double m) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (!(m > 0.0)) throw DomainError("ball radius must be positive");
  return std::exp(d * std::log(m) + 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0));
}

double sphere_area(int d) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  return 2.0 * std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d));
}

double student_t_cdf(double nu, double t) {
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = nu / (nu + t * t);
  const double tail = 0.5 * regularized_beta(0.5 * nu, 0.5, x);
  return t > 0 ? 1.0 - tail : tail;
}

}  // namespace l1pred::special
