#include "l1pred/estimator.hpp"

#include <cmath>
#include <sstream>

#include "l1pred/errors.hpp"

namespace l1pred {

CenterEstimator CenterEstimator::raw() { return CenterEstimator{}; }

CenterEstimator CenterEstimator::mle_ball(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("ball radius m must be positive and finite");
  CenterEstimator e;
  e.kind_ = Kind::mle_ball;
  e.radius_ = m;
  return e;
}

CenterEstimator CenterEstimator::custom(std::function<void(std::span<const double>, std::span<double>)> rule,
                                        bool equivariant, std::string name) {
  if (!rule) throw ConfigError("custom estimator needs a rule");
  CenterEstimator e;
  e.kind_ = Kind::custom;
  e.rule_ = std::move(rule);
  e.equivariant_ = equivariant;
  e.name_ = std::move(name);
  return e;
}

void CenterEstimator::apply(std::span<const double> x, std::span<double> out) const {
  switch (kind_) {
    case Kind::raw:
      std::copy(x.begin(), x.end(), out.begin());
      return;
    case Kind::mle_ball: {
      const double r = norm2(x);
      const double scale = r > radius_ ? radius_ / r : 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
      return;
    }
    case Kind::custom:
      rule_(x, out);
      return;
  }
}

Point CenterEstimator::operator()(std::span<const double> x) const {
  Point out(x.size());
  apply(x, out);
  return out;
}

std::string CenterEstimator::describe() const {
  switch (kind_) {
    case Kind::raw:
      return "raw";
    case Kind::mle_ball: {
      std::ostringstream s;
      s.precision(17);
      s << "mle-ball(m=" << radius_ << ")";
      return s.str();
    }
    case Kind::custom:
      return "custom:" + name_;
  }
  return "raw";
}

Point mle_ball_estimator(std::span<const double> x, double m) { return CenterEstimator::mle_ball(m)(x); }

double predictive_eval(const RadialModel& q, double c, std::span<const double> center, std::span<const double> y) {
  if (!(c > 0.0)) throw DomainError("scale factor c must be positive");
  const double r = distance(y, center) / c;
  return std::exp(q.log_generator(r * r) - q.dim() * std::log(c));
}

double predictive_eval(const PredictiveSpec& spec, std::span<const double> center, std::span<const double> y) {
  return predictive_eval(spec.base, spec.scale_c, center, y);
}

}  // namespace l1pred
