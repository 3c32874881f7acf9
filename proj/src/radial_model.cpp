#include "l1pred/radial_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "l1pred/errors.hpp"
#include "l1pred/quadrature.hpp"
#include "l1pred/rng.hpp"
#include "l1pred/special.hpp"

namespace l1pred {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double log_sum_exp(std::span<const double> xs) {
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double normal_log_generator(int d, double var, double t) {
  return -0.5 * d * std::log(2.0 * std::numbers::pi * var) - t / (2.0 * var);
}

// log C for the inverse-gamma scale mixture generator C (scale + t/2)^-(shape + d/2).
double student_log_const(int d, const InverseGammaMixing& ig) {
  return ig.shape * std::log(ig.scale) + std::lgamma(ig.shape + 0.5 * d) - std::lgamma(ig.shape) -
         0.5 * d * std::log(2.0 * std::numbers::pi);
}

// Smallest z in [0, inf) at which the monotone predicate becomes true, by
// bisection on a geometrically grown bracket.
template <class Pred>
double first_true(Pred pred) {
  if (pred(0.0)) return 0.0;
  double hi = 1.0;
  while (!pred(hi)) {
    hi *= 2.0;
    if (hi > 1e300) return kInf;
  }
  double lo = 0.0;
  for (int i = 0; i < 400 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

RadialModel::RadialModel(int dim, Kind kind) : dim_(dim), kind_(std::move(kind)) {
  require_valid();
  std::visit(Overloaded{
                 [&](const NormalLaw& k) { log_norm_const_ = normal_log_generator(dim_, k.variance, 0.0); },
                 [&](const UniformBallLaw& k) { log_norm_const_ = -std::log(special::ball_volume(dim_, k.radius)); },
                 [&](const NormalMixtureLaw& k) {
                   if (const auto* ig = std::get_if<InverseGammaMixing>(&k.mixing)) {
                     log_norm_const_ = student_log_const(dim_, *ig);
                   }
                 },
                 [](const CustomLaw&) {},
             },
             kind_);
}

void RadialModel::require_valid() const {
  if (dim_ < 1) throw ConfigError("dimension must be a positive integer, got " + std::to_string(dim_));
  std::visit(Overloaded{
                 [](const NormalLaw& k) {
                   if (!(k.variance > 0.0) || !std::isfinite(k.variance))
                     throw ConfigError("normal variance must be positive and finite");
                 },
                 [](const UniformBallLaw& k) {
                   if (!(k.radius > 0.0) || !std::isfinite(k.radius))
                     throw ConfigError("uniform ball radius must be positive and finite");
                 },
                 [](const NormalMixtureLaw& k) {
                   std::visit(Overloaded{
                                  [](const PointMassMixing& pm) {
                                    if (pm.variances.empty() || pm.variances.size() != pm.weights.size())
                                      throw ConfigError("point-mass mixing needs matching nonempty variances and weights");
                                    double total = 0.0;
                                    for (std::size_t i = 0; i < pm.weights.size(); ++i) {
                                      if (!(pm.variances[i] > 0.0))
                                        throw ConfigError("mixing variances must be positive");
                                      if (!(pm.weights[i] >= 0.0)) throw ConfigError("mixing weights must be nonnegative");
                                      total += pm.weights[i];
                                    }
                                    if (std::abs(total - 1.0) > 1e-12) {
                                      throw ConfigError("mixing weights sum to " + format_number(total) +
                                                        ", expected 1");
                                    }
                                  },
                                  [](const InverseGammaMixing& ig) {
                                    if (!(ig.shape > 0.0) || !(ig.scale > 0.0))
                                      throw ConfigError("inverse-gamma mixing needs positive shape and scale");
                                  },
                              },
                              k.mixing);
                 },
                 [](const CustomLaw& k) {
                   if (!k.generator) throw ConfigError("custom model needs a generator");
                   if (!(k.support_radius > 0.0)) throw ConfigError("custom support radius must be positive");
                 },
             },
             kind_);
}

RadialModel RadialModel::normal(int d, double variance) { return RadialModel(d, NormalLaw{variance}); }

RadialModel RadialModel::uniform_ball(int d, double radius) { return RadialModel(d, UniformBallLaw{radius}); }

RadialModel RadialModel::normal_mixture(int d, MixingLaw mixing) {
  return RadialModel(d, NormalMixtureLaw{std::move(mixing)});
}

RadialModel RadialModel::custom(int d, std::function<double(double)> generator, Monotonicity shape,
                                double support_radius, std::string name) {
  return RadialModel(d, CustomLaw{std::move(generator), shape, support_radius, std::move(name)});
}

double RadialModel::log_generator(double t) const {
  return std::visit(
      Overloaded{
          [&](const NormalLaw& k) { return normal_log_generator(dim_, k.variance, t); },
          [&](const UniformBallLaw& k) { return t <= k.radius * k.radius ? log_norm_const_ : -kInf; },
          [&](const NormalMixtureLaw& k) {
            return std::visit(Overloaded{
                                  [&](const PointMassMixing& pm) {
                                    std::vector<double> terms;
                                    terms.reserve(pm.weights.size());
                                    for (std::size_t i = 0; i < pm.weights.size(); ++i) {
                                      if (pm.weights[i] == 0.0) continue;
                                      terms.push_back(std::log(pm.weights[i]) +
                                                      normal_log_generator(dim_, pm.variances[i], t));
                                    }
                                    return log_sum_exp(terms);
                                  },
                                  [&](const InverseGammaMixing& ig) {
                                    return log_norm_const_ - (ig.shape + 0.5 * dim_) * std::log(ig.scale + 0.5 * t);
                                  },
                              },
                              k.mixing);
          },
          [&](const CustomLaw& k) {
            const double g = k.generator(t);
            return g > 0.0 ? std::log(g) : -kInf;
          },
      },
      kind_);
}

double RadialModel::generator(double t) const {
  if (t < 0.0) throw DomainError("generator argument is a squared norm and must be >= 0");
  if (const auto* k = std::get_if<CustomLaw>(&kind_)) return k->generator(t);
  return std::exp(log_generator(t));
}

double RadialModel::support_radius() const {
  if (const auto* k = std::get_if<UniformBallLaw>(&kind_)) return k->radius;
  if (const auto* k = std::get_if<CustomLaw>(&kind_)) return k->support_radius;
  return kInf;
}

bool RadialModel::nonincreasing() const {
  if (const auto* k = std::get_if<CustomLaw>(&kind_)) return k->shape != Monotonicity::none;
  return true;
}

bool RadialModel::strictly_decreasing() const {
  if (std::holds_alternative<UniformBallLaw>(kind_)) return false;
  if (const auto* k = std::get_if<CustomLaw>(&kind_)) return k->shape == Monotonicity::strictly_decreasing;
  return true;
}

double RadialModel::norm_pdf(double r) const {
  if (r < 0.0) throw DomainError("norm density needs r >= 0");
  if (r == 0.0) return dim_ == 1 ? 2.0 * generator(0.0) : 0.0;
  const double lg = log_generator(r * r);
  if (!std::isfinite(lg)) return 0.0;
  return std::exp(std::log(special::sphere_area(dim_)) + (dim_ - 1) * std::log(r) + lg);
}

double RadialModel::norm_cdf(double r) const {
  if (!(r > 0.0)) return 0.0;
  if (std::isinf(r)) return 1.0;
  const double half_d = 0.5 * dim_;
  return std::visit(
      Overloaded{
          [&](const NormalLaw& k) { return special::regularized_gamma_p(half_d, r * r / (2.0 * k.variance)); },
          [&](const UniformBallLaw& k) { return r >= k.radius ? 1.0 : std::pow(r / k.radius, dim_); },
          [&](const NormalMixtureLaw& k) {
            return std::visit(
                Overloaded{
                    [&](const PointMassMixing& pm) {
                      double s = 0.0;
                      for (std::size_t i = 0; i < pm.weights.size(); ++i)
                        s += pm.weights[i] * special::regularized_gamma_p(half_d, r * r / (2.0 * pm.variances[i]));
                      return s;
                    },
                    [&](const InverseGammaMixing& ig) {
                      // W/(W + scale*G) ~ Beta(d/2, shape) with ||X||^2 = 2 scale W/(scale G)
                      return special::regularized_beta(half_d, ig.shape, r * r / (2.0 * ig.scale + r * r));
                    },
                },
                k.mixing);
          },
          [&](const CustomLaw& k) {
            const double hi = std::min(r, k.support_radius);
            return std::min(1.0, quad::adaptive([&](double s) { return norm_pdf(s); }, 0.0, hi, 1e-12));
          },
      },
      kind_);
}

double RadialModel::norm_sf(double r) const {
  if (!(r > 0.0)) return 1.0;
  if (std::isinf(r)) return 0.0;
  const double half_d = 0.5 * dim_;
  return std::visit(
      Overloaded{
          [&](const NormalLaw& k) { return boost::math::gamma_q(half_d, r * r / (2.0 * k.variance)); },
          [&](const NormalMixtureLaw& k) {
            return std::visit(
                Overloaded{
                    [&](const PointMassMixing& pm) {
                      double s = 0.0;
                      for (std::size_t i = 0; i < pm.weights.size(); ++i)
                        s += pm.weights[i] * boost::math::gamma_q(half_d, r * r / (2.0 * pm.variances[i]));
                      return s;
                    },
                    [&](const InverseGammaMixing& ig) {
                      return special::regularized_beta(ig.shape, half_d, 2.0 * ig.scale / (2.0 * ig.scale + r * r));
                    },
                },
                k.mixing);
          },
          [&](const auto&) { return 1.0 - norm_cdf(r); },
      },
      kind_);
}

double RadialModel::norm_quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return support_radius();
  const double half_d = 0.5 * dim_;
  if (const auto* k = std::get_if<NormalLaw>(&kind_)) {
    return std::sqrt(2.0 * k->variance * boost::math::gamma_p_inv(half_d, u));
  }
  if (const auto* k = std::get_if<UniformBallLaw>(&kind_)) return k->radius * std::pow(u, 1.0 / dim_);
  if (const auto* k = std::get_if<NormalMixtureLaw>(&kind_)) {
    if (const auto* ig = std::get_if<InverseGammaMixing>(&k->mixing)) {
      const double x = boost::math::ibeta_inv(half_d, ig->shape, u);
      return std::sqrt(2.0 * ig->scale * x / (1.0 - x));
    }
  }
  return first_true([&](double r) { return norm_cdf(r) >= u; });
}

double RadialModel::truncation_radius(double tail_mass) const {
  const double support = support_radius();
  if (std::isfinite(support)) return support;
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) throw ConfigError("truncation mass must lie in (0, 1)");
  const double half_d = 0.5 * dim_;
  if (const auto* k = std::get_if<NormalLaw>(&kind_)) {
    return std::sqrt(2.0 * k->variance * boost::math::gamma_q_inv(half_d, tail_mass));
  }
  if (const auto* k = std::get_if<NormalMixtureLaw>(&kind_)) {
    if (const auto* ig = std::get_if<InverseGammaMixing>(&k->mixing)) {
      // sf(r) = I_y(shape, d/2) with y = 2 scale / (2 scale + r^2)
      const double y = boost::math::ibeta_inv(ig->shape, half_d, tail_mass);
      return std::sqrt(2.0 * ig->scale * (1.0 - y) / y);
    }
  }
  return first_true([&](double r) { return norm_sf(r) <= tail_mass; });
}

double RadialModel::norm_median() const { return norm_quantile(0.5); }

double RadialModel::generalized_inverse(double level) const {
  if (level < 0.0) throw DomainError("generalized inverse needs level >= 0");
  return generalized_inverse_log(level > 0.0 ? std::log(level) : -kInf);
}

double RadialModel::generalized_inverse_log(double log_level) const {
  if (!nonincreasing()) {
    throw DomainError("generalized inverse requires a nonincreasing generator; model '" + describe() +
                      "' is not declared unimodal");
  }
  if (log_level >= log_generator(0.0)) return 0.0;
  return std::visit(
      Overloaded{
          [&](const NormalLaw& k) {
            if (std::isinf(log_level)) return kInf;
            return std::max(0.0, -2.0 * k.variance * (log_level - log_norm_const_));
          },
          [&](const UniformBallLaw& k) { return k.radius * k.radius; },
          [&](const NormalMixtureLaw& k) {
            if (std::isinf(log_level)) return kInf;
            if (const auto* ig = std::get_if<InverseGammaMixing>(&k.mixing)) {
              const double base = std::exp((log_norm_const_ - log_level) / (ig->shape + 0.5 * dim_));
              return std::max(0.0, 2.0 * (base - ig->scale));
            }
            double hi = 1.0;
            while (log_generator(hi) > log_level) hi *= 2.0;
            boost::math::tools::eps_tolerance<double> tol(44);
            std::uintmax_t max_iter = 200;
            const auto [a, b] = boost::math::tools::toms748_solve(
                [&](double z) { return log_generator(z) - log_level; }, 0.0, hi, tol, max_iter);
            return 0.5 * (a + b);
          },
          [&](const CustomLaw& k) {
            const double level = std::exp(log_level);
            return first_true([&](double z) { return k.generator(z) <= level; });
          },
      },
      kind_);
}

double RadialModel::upper_inverse_log(double log_level) const {
  if (const auto* k = std::get_if<UniformBallLaw>(&kind_)) {
    if (std::isinf(log_level) && log_level < 0) return kInf;
    return log_level <= log_norm_const_ ? k->radius * k->radius : 0.0;
  }
  if (const auto* k = std::get_if<CustomLaw>(&kind_)) {
    if (k->shape != Monotonicity::strictly_decreasing) {
      if (!nonincreasing()) {
        throw DomainError("upper inverse requires a nonincreasing generator");
      }
      if (std::isinf(log_level) && log_level < 0) return kInf;
      const double level = std::exp(log_level);
      if (k->generator(0.0) < level) return 0.0;
      return first_true([&](double z) { return k->generator(z) < level; });
    }
  }
  return generalized_inverse_log(log_level);
}

double RadialModel::marginal_cdf(double t) const {
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  return std::visit(
      Overloaded{
          [&](const NormalLaw& k) { return special::std_normal_cdf(t / std::sqrt(k.variance)); },
          [&](const UniformBallLaw& k) { return special::ball_marginal_cdf(dim_, t / k.radius); },
          [&](const NormalMixtureLaw& k) {
            return std::visit(
                Overloaded{
                    [&](const PointMassMixing& pm) {
                      double s = 0.0;
                      for (std::size_t i = 0; i < pm.weights.size(); ++i)
                        s += pm.weights[i] * special::std_normal_cdf(t / std::sqrt(pm.variances[i]));
                      return s;
                    },
                    [&](const InverseGammaMixing& ig) {
                      // X1 = sqrt(scale/shape) * t_{2 shape}
                      return special::student_t_cdf(2.0 * ig.shape, t * std::sqrt(ig.shape / ig.scale));
                    },
                },
                k.mixing);
          },
          [&](const CustomLaw& k) {
            const double a = std::abs(t);
            double upper;
            if (dim_ == 1) {
              upper = 0.5 + 0.5 * norm_cdf(a);
            } else {
              // P(X1 <= a) = P(R <= a) + E[F_V(a/R); R > a]
              const double tail = quad::adaptive(
                  [&](double r) { return norm_pdf(r) * special::cross_angle_cdf(dim_, a / r); }, a,
                  k.support_radius, 1e-12);
              upper = norm_cdf(a) + tail;
            }
            return t > 0 ? upper : 1.0 - upper;
          },
      },
      kind_);
}

double RadialModel::sample_norm(std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  auto chi = [&](double var) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double z = gauss(rng);
      s += z * z;
    }
    return std::sqrt(var * s);
  };
  return std::visit(
      Overloaded{
          [&](const NormalLaw& k) { return chi(k.variance); },
          [&](const UniformBallLaw& k) { return k.radius * std::pow(unif(rng), 1.0 / dim_); },
          [&](const NormalMixtureLaw& k) {
            return std::visit(Overloaded{
                                  [&](const PointMassMixing& pm) {
                                    const double u = unif(rng);
                                    double acc = 0.0;
                                    std::size_t i = 0;
                                    for (; i + 1 < pm.weights.size(); ++i) {
                                      acc += pm.weights[i];
                                      if (u < acc) break;
                                    }
                                    return chi(pm.variances[i]);
                                  },
                                  [&](const InverseGammaMixing& ig) {
                                    std::gamma_distribution<double> precision(ig.shape, 1.0);
                                    return chi(ig.scale / precision(rng));
                                  },
                              },
                              k.mixing);
          },
          [&](const CustomLaw&) { return norm_quantile(unif(rng)); },
      },
      kind_);
}

void RadialModel::sample_offset(std::mt19937_64& rng, std::span<double> out) const {
  if (static_cast<int>(out.size()) != dim_) throw DomainError("sample buffer size must equal the dimension");
  double sd = 0.0;
  if (const auto* k = std::get_if<NormalLaw>(&kind_)) sd = std::sqrt(k->variance);
  if (const auto* k = std::get_if<NormalMixtureLaw>(&kind_)) {
    std::uniform_real_distribution<double> unif;
    if (const auto* pm = std::get_if<PointMassMixing>(&k->mixing)) {
      const double u = unif(rng);
      double acc = 0.0;
      std::size_t i = 0;
      for (; i + 1 < pm->weights.size(); ++i) {
        acc += pm->weights[i];
        if (u < acc) break;
      }
      sd = std::sqrt(pm->variances[i]);
    } else {
      const auto& ig = std::get<InverseGammaMixing>(k->mixing);
      std::gamma_distribution<double> precision(ig.shape, 1.0);
      sd = std::sqrt(ig.scale / precision(rng));
    }
  }
  if (sd > 0.0) {
    std::normal_distribution<double> gauss;
    for (double& v : out) v = sd * gauss(rng);
    return;
  }
  const double r = sample_norm(rng);
  sample_direction(rng, out);
  for (double& v : out) v *= r;
}

std::string RadialModel::describe() const {
  const std::string d = "d=" + std::to_string(dim_);
  return std::visit(
      Overloaded{
          [&](const NormalLaw& k) { return "normal:" + d + ",var=" + format_number(k.variance); },
          [&](const UniformBallLaw& k) { return "uniball:" + d + ",m=" + format_number(k.radius); },
          [&](const NormalMixtureLaw& k) {
            return std::visit(Overloaded{
                                  [&](const PointMassMixing& pm) {
                                    std::string s = "mixnormal:" + d + ",mix=discrete(";
                                    for (std::size_t i = 0; i < pm.weights.size(); ++i) {
                                      if (i) s += ',';
                                      s += format_number(pm.variances[i]) + ":" + format_number(pm.weights[i]);
                                    }
                                    return s + ")";
                                  },
                                  [&](const InverseGammaMixing& ig) {
                                    return "mixnormal:" + d + ",mix=invgamma(" + format_number(ig.shape) + "," +
                                           format_number(ig.scale) + ")";
                                  },
                              },
                              k.mixing);
          },
          [&](const CustomLaw& k) { return "custom:" + d + ",name=" + k.name; },
      },
      kind_);
}

// ---------------------------------------------------------------------------
// Spec-string parsing

namespace {

std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_number(std::string_view token, std::string_view context) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto res = std::from_chars(token.data(), end, value);
  if (token.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("invalid number '" + std::string(token) + "' in " + std::string(context));
  }
  return value;
}

int parse_dim(std::string_view token, std::string_view context) {
  int value = 0;
  const auto* end = token.data() + token.size();
  auto res = std::from_chars(token.data(), end, value);
  if (token.empty() || res.ec != std::errc() || res.ptr != end || value < 1) {
    throw ConfigError("invalid dimension '" + std::string(token) + "' in " + std::string(context));
  }
  return value;
}

MixingLaw parse_mixing(std::string_view token, std::string_view context) {
  const auto open = token.find('(');
  if (open == std::string_view::npos || token.back() != ')') {
    throw ConfigError("invalid mixing '" + std::string(token) + "' in " + std::string(context));
  }
  const auto name = token.substr(0, open);
  const auto args = split_top_level(token.substr(open + 1, token.size() - open - 2), ',');
  if (name == "invgamma") {
    if (args.size() != 2) throw ConfigError("invgamma mixing takes (shape,scale): '" + std::string(token) + "'");
    return InverseGammaMixing{parse_number(args[0], context), parse_number(args[1], context)};
  }
  if (name == "discrete") {
    PointMassMixing pm;
    for (const auto& a : args) {
      const auto colon = a.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("discrete mixing entries are variance:weight, got '" + a + "'");
      }
      pm.variances.push_back(parse_number(std::string_view(a).substr(0, colon), context));
      pm.weights.push_back(parse_number(std::string_view(a).substr(colon + 1), context));
    }
    return pm;
  }
  throw ConfigError("unknown mixing law '" + std::string(name) + "' in " + std::string(context));
}

}  // namespace

RadialModel parse_model(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("model spec '" + std::string(spec) + "' lacks 'kind:' prefix");
  }
  const auto kind = spec.substr(0, colon);
  int d = 0;
  double var = 1.0;
  double m = 1.0;
  std::optional<MixingLaw> mix;
  for (const auto& field : split_top_level(spec.substr(colon + 1), ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + field + "' in '" + std::string(spec) + "'");
    const std::string_view key = std::string_view(field).substr(0, eq);
    const std::string_view value = std::string_view(field).substr(eq + 1);
    if (key == "d") {
      d = parse_dim(value, spec);
    } else if (key == "var" && kind == "normal") {
      var = parse_number(value, spec);
    } else if (key == "m" && kind == "uniball") {
      m = parse_number(value, spec);
    } else if (key == "mix" && kind == "mixnormal") {
      mix = parse_mixing(value, spec);
    } else {
      throw ConfigError("unknown field '" + field + "' in '" + std::string(spec) + "'");
    }
  }
  if (d == 0) throw ConfigError("model spec '" + std::string(spec) + "' lacks d=");
  if (kind == "normal") return RadialModel::normal(d, var);
  if (kind == "uniball") return RadialModel::uniform_ball(d, m);
  if (kind == "mixnormal") {
    if (!mix) throw ConfigError("mixnormal spec '" + std::string(spec) + "' lacks mix=");
    return RadialModel::normal_mixture(d, *mix);
  }
  throw ConfigError("unknown model kind '" + std::string(kind) + "'");
}

// ---------------------------------------------------------------------------

std::vector<double> sample_norm(const RadialModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("sample size must be positive");
  std::vector<double> out(n);
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  parallel_for(chunks, [&](std::size_t c) {
    auto rng = make_engine(seed, c);
    const std::size_t end = std::min(n, (c + 1) * kChunkSize);
    for (std::size_t i = c * kChunkSize; i < end; ++i) out[i] = model.sample_norm(rng);
  });
  return out;
}

double norm_pdf(const RadialModel& model, double r) { return model.norm_pdf(r); }

double generalized_inverse(const RadialModel& model, double level) { return model.generalized_inverse(level); }

RadialModel make_normal(int d, double sigma2) { return RadialModel::normal(d, sigma2); }

RadialModel make_uniform_ball(int d, double m) { return RadialModel::uniform_ball(d, m); }

RadialModel make_scale_mixture_normal(int d, MixingLaw mixing) {
  return RadialModel::normal_mixture(d, std::move(mixing));
}

void sample_direction(std::mt19937_64& rng, std::span<double> out) {
  std::normal_distribution<double> gauss;
  double s = 0.0;
  do {
    s = 0.0;
    for (double& v : out) {
      v = gauss(rng);
      s += v * v;
    }
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (double& v : out) v *= inv;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace l1pred
