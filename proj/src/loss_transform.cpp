#include "l1pred/loss_transform.hpp"

#include <charconv>
#include <cmath>

#include "l1pred/errors.hpp"

namespace l1pred {

LossTransform LossTransform::identity() { return LossTransform{}; }

LossTransform LossTransform::power(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("power loss transform needs a positive exponent");
  LossTransform g;
  g.kind_ = Kind::power;
  g.exponent_ = k;
  return g;
}

LossTransform LossTransform::custom(std::function<double(double)> apply, std::function<double(double)> derivative,
                                    std::string name) {
  if (!apply || !derivative) throw ConfigError("custom loss transform needs both the map and its derivative");
  if (!std::isfinite(apply(2.0))) throw ConfigError("custom loss transform must be finite at 2");
  if (!(apply(2.0) > apply(0.0))) throw ConfigError("custom loss transform must be increasing");
  LossTransform g;
  g.kind_ = Kind::custom;
  g.apply_ = std::move(apply);
  g.derivative_ = std::move(derivative);
  g.name_ = std::move(name);
  return g;
}

double LossTransform::operator()(double loss) const {
  switch (kind_) {
    case Kind::identity:
      return loss;
    case Kind::power:
      return std::pow(std::max(loss, 0.0), exponent_);
    case Kind::custom:
      return apply_(loss);
  }
  return loss;
}

double LossTransform::derivative(double loss) const {
  switch (kind_) {
    case Kind::identity:
      return 1.0;
    case Kind::power:
      return exponent_ * std::pow(std::max(loss, 0.0), exponent_ - 1.0);
    case Kind::custom:
      return derivative_(loss);
  }
  return 1.0;
}

std::string LossTransform::describe() const {
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::power: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, exponent_);
      return "power:" + std::string(buf, res.ptr);
    }
    case Kind::custom:
      return "custom:" + name_;
  }
  return "identity";
}

LossTransform parse_loss_transform(std::string_view spec) {
  if (spec == "identity") return LossTransform::identity();
  if (spec.starts_with("power:")) {
    const auto arg = spec.substr(6);
    double k = 0.0;
    auto res = std::from_chars(arg.data(), arg.data() + arg.size(), k);
    if (arg.empty() || res.ec != std::errc() || res.ptr != arg.data() + arg.size()) {
      throw ConfigError("invalid exponent '" + std::string(arg) + "' in loss transform '" + std::string(spec) + "'");
    }
    return LossTransform::power(k);
  }
  throw ConfigError("unknown loss transform '" + std::string(spec) + "', expected identity or power:k");
}

}  // namespace l1pred
