#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "l1pred/radial_model.hpp"

namespace l1pred {

/// Law of a nonnegative distance |X - theta| (or ||X - theta||): density,
/// c.d.f., upper end of the support and points where the density jumps or
/// bends.
struct AbsLaw {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  double upper = 0.0;
  std::vector<double> kinks;

  static AbsLaw from_model(const RadialModel& model);
  /// |X - theta| for X ~ U(theta - A, theta + A).
  static AbsLaw uniform(double half_width);
  /// |(X_(1) + X_(n))/2 - theta| for n i.i.d. U(theta - A, theta + A) draws:
  /// density n (A - s)^(n-1) / A^n on (0, A).
  static AbsLaw midrange(int n, double half_width);
  /// Law of |X| / factor.
  AbsLaw scaled(double factor) const;
};

/// Risk of U(X - c, X + c) for Y ~ U(theta - 1, theta + 1), with |X - theta|
/// distributed as abs_x.
double univariate_uniform_risk(const AbsLaw& abs_x, double c);
/// Same with Y ~ U(theta - B, theta + B) and U(X - cB, X + cB).
double univariate_uniform_risk(const AbsLaw& abs_x, double c, double B);

/// Volume of the intersection of the unit ball at the origin with the ball
/// of radius c centered at distance x_norm > 0.
double ball_intersection_volume(int d, double x_norm, double c);

/// Risk of the uniform density on the ball of radius c about X for Y
/// uniform on the unit ball about theta; abs_x is the law of ||X - theta||.
double multivariate_uniform_risk(const AbsLaw& abs_x, int d, double c);
/// Same with Y uniform on the ball of radius m and predictive radius c m.
double multivariate_uniform_risk(const AbsLaw& abs_x, int d, double c, double m);

/// X and Y both uniform on unit balls of R^3.
double uniform_d3_closed_risk(double c);

/// Plug-in risk for normal X, Y with r = var_Y / var_X through a Gauss
/// hypergeometric series. Throws DomainError for r <= 1/4.
double normal_R1_hypergeometric(int d, double r);
/// Hypergeometric series where it converges, radial quadrature otherwise.
double normal_R1(int d, double r);

enum class ConditionStatus { holds, fails, undetermined };

struct PlugInOptimalityCheck {
  ConditionStatus mean_condition;   // E(|X| given |X| <= 2) <= 1 and f(s) >= f(s + 2)
  ConditionStatus monotone_density;  // f nonincreasing
  double conditional_mean;
  bool sufficient() const {
    return mean_condition == ConditionStatus::holds || monotone_density == ConditionStatus::holds;
  }
};

/// Grid check (10^3 points) of the sufficient conditions under which the
/// unexpanded uniform plug-in is optimal in d = 1.
PlugInOptimalityCheck check_plugin_optimality(const AbsLaw& abs_x, int grid_points = 1000);

struct IntervalDensity {
  double center;
  double half_width;
  double lower() const { return center - half_width; }
  double upper() const { return center + half_width; }
};

/// Posterior-median predictive density for Y ~ U(theta - B, theta + B)
/// from x_i ~ U(theta - A, theta + A) under a flat prior.
/// Throws DomainError when x_(n) - x_(1) > 2A and when
/// x_(n) - x_(1) < 2A - 4B (no y has posterior median above zero).
IntervalDensity bayes_uniform_predictive(std::span<const double> sample, double A, double B);

}  // namespace l1pred
