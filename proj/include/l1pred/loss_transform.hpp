#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace l1pred {

/// Strictly increasing map applied to the L1 loss, L in [0, 2], together
/// with its derivative.
class LossTransform {
 public:
  enum class Kind { identity, power, custom };

  static LossTransform identity();
  /// gamma(L) = L^k.
  static LossTransform power(double k);
  static LossTransform custom(std::function<double(double)> apply, std::function<double(double)> derivative,
                              std::string name);

  double operator()(double loss) const;
  double derivative(double loss) const;

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::identity;
  double exponent_ = 1.0;
  std::function<double(double)> apply_;
  std::function<double(double)> derivative_;
  std::string name_;
};

/// Parses `identity` or `power:k`.
LossTransform parse_loss_transform(std::string_view spec);

}  // namespace l1pred
