#pragma once

#include <functional>
#include <span>
#include <string>

#include "l1pred/radial_model.hpp"

namespace l1pred {

/// Center estimator theta_hat(X) for the predictive density.
class CenterEstimator {
 public:
  enum class Kind { raw, mle_ball, custom };

  static CenterEstimator raw();
  /// Projection of X onto the closed ball of radius m.
  static CenterEstimator mle_ball(double m);
  /// `equivariant` declares that the rule has the form g(||x||) x.
  static CenterEstimator custom(std::function<void(std::span<const double>, std::span<double>)> rule, bool equivariant,
                                std::string name);

  void apply(std::span<const double> x, std::span<double> out) const;
  Point operator()(std::span<const double> x) const;

  Kind kind() const { return kind_; }
  double radius() const { return radius_; }
  bool orthogonally_equivariant() const { return equivariant_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::raw;
  double radius_ = 0.0;
  bool equivariant_ = true;
  std::function<void(std::span<const double>, std::span<double>)> rule_;
  std::string name_;
};

/// min{m, ||x||} x / ||x||, with 0 mapped to 0.
Point mle_ball_estimator(std::span<const double> x, double m);

/// Scale-expanded plug-in density y -> c^-d q(||y - center||^2 / c^2).
struct PredictiveSpec {
  CenterEstimator center;
  double scale_c;
  RadialModel base;
};

double predictive_eval(const PredictiveSpec& spec, std::span<const double> center, std::span<const double> y);
double predictive_eval(const RadialModel& q, double c, std::span<const double> center, std::span<const double> y);

}  // namespace l1pred
