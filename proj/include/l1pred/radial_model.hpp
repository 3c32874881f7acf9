#pragma once

#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace l1pred {

using Point = std::vector<double>;

enum class Monotonicity { none, nonincreasing, strictly_decreasing };

struct PointMassMixing {
  std::vector<double> variances;
  std::vector<double> weights;
};

/// sigma^2 ~ InvGamma(shape, scale), i.e. 1/sigma^2 ~ Gamma(shape, rate = scale).
/// shape = scale = nu/2 gives the multivariate Student t with nu degrees of
/// freedom; nu = 1 is the Cauchy.
struct InverseGammaMixing {
  double shape;
  double scale;
};

using MixingLaw = std::variant<PointMassMixing, InverseGammaMixing>;

struct NormalLaw {
  double variance;
};
struct UniformBallLaw {
  double radius;
};
struct NormalMixtureLaw {
  MixingLaw mixing;
};
struct CustomLaw {
  std::function<double(double)> generator;  // of t = squared norm
  Monotonicity shape;
  double support_radius;
  std::string name;
};

/// A spherically symmetric location density x -> p(||x - theta||^2) on R^d,
/// held through its radial generator p(t), t = squared norm. Immutable.
class RadialModel {
 public:
  using Kind = std::variant<NormalLaw, UniformBallLaw, NormalMixtureLaw, CustomLaw>;

  static RadialModel normal(int d, double variance);
  static RadialModel uniform_ball(int d, double radius);
  static RadialModel normal_mixture(int d, MixingLaw mixing);
  /// The generator must integrate to one over R^d; `shape` declares the
  /// monotonicity that unimodal-only operations check.
  static RadialModel custom(int d, std::function<double(double)> generator, Monotonicity shape,
                            double support_radius, std::string name);

  int dim() const { return dim_; }
  const Kind& kind() const { return kind_; }

  double generator(double t) const;
  double log_generator(double t) const;

  /// Smallest R with P(||X - theta|| <= R) = 1; +inf for unbounded laws.
  double support_radius() const;
  bool nonincreasing() const;
  bool strictly_decreasing() const;

  /// Density, c.d.f. and survival function of ||X - theta||.
  double norm_pdf(double r) const;
  double norm_cdf(double r) const;
  double norm_sf(double r) const;
  double norm_quantile(double u) const;

  /// Radius holding all but `tail_mass` of the norm law (support radius when finite).
  double truncation_radius(double tail_mass = 1e-10) const;
  /// Median of the norm law; sets the length scale of quadrature maps.
  double norm_median() const;

  /// inf{z >= 0 : p(z) <= level}; 0 whenever level >= p(0).
  double generalized_inverse(double level) const;
  double generalized_inverse_log(double log_level) const;
  /// sup{z >= 0 : p(z) >= level}, with sup of the empty set taken as 0.
  /// Equals the generalized inverse wherever p is strictly decreasing; it
  /// differs on plateaus such as the uniform ball.
  double upper_inverse_log(double log_level) const;

  /// C.d.f. of the first coordinate of X - theta.
  double marginal_cdf(double t) const;

  double sample_norm(std::mt19937_64& rng) const;
  /// Writes one draw of X - theta into out (size dim()).
  void sample_offset(std::mt19937_64& rng, std::span<double> out) const;

  /// Canonical spec string, accepted back by parse_model.
  std::string describe() const;

 private:
  RadialModel(int dim, Kind kind);
  void require_valid() const;

  int dim_;
  Kind kind_;
  double log_norm_const_ = 0.0;
};

/// Parses `normal:d=3,var=1`, `uniball:d=3,m=1`,
/// `mixnormal:d=2,mix=invgamma(0.5,0.5)` or `mixnormal:d=2,mix=discrete(1:0.5,4:0.5)`.
/// Throws ConfigError naming the offending token.
RadialModel parse_model(std::string_view spec);

std::vector<double> sample_norm(const RadialModel& model, std::size_t n, std::uint64_t seed);

double norm_pdf(const RadialModel& model, double r);
double generalized_inverse(const RadialModel& model, double level);

RadialModel make_normal(int d, double sigma2);
RadialModel make_uniform_ball(int d, double m);
RadialModel make_scale_mixture_normal(int d, MixingLaw mixing);

/// Uniform direction on the unit sphere of R^out.size().
void sample_direction(std::mt19937_64& rng, std::span<double> out);

double norm2(std::span<const double> x);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace l1pred
