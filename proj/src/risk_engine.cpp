#include "l1pred/risk_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "l1pred/errors.hpp"
#include "l1pred/quadrature.hpp"
#include "l1pred/rng.hpp"
#include "l1pred/special.hpp"

namespace l1pred {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCenterHit = 1e-12;
constexpr int kScanPoints = 48;
constexpr int kMinPieceNodes = 16;

const quad::GaussLegendre& rule(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<quad::GaussLegendre>> rules;
  std::lock_guard lock(mutex);
  auto& slot = rules[n];
  if (!slot) slot = std::make_unique<quad::GaussLegendre>(static_cast<std::size_t>(n));
  return *slot;
}

// Radial axis [lo, hi]. Unbounded axes are integrated in s with
// t = lo + scale * s / (1 - s), which pulls the far tail into a short
// interval; bounded axes are integrated in t directly.
struct Axis {
  double lo;
  double hi;
  bool mapped;
  double scale;

  double to_s(double t) const { return mapped ? (t - lo) / (scale + t - lo) : t; }
  double to_t(double s) const { return mapped ? lo + scale * s / (1.0 - s) : s; }
  double jacobian(double s) const { return mapped ? scale / ((1.0 - s) * (1.0 - s)) : 1.0; }
};

Axis make_axis(const RadialModel& model, double lo, const QuadSpec& quad) {
  const double support = model.support_radius();
  if (std::isfinite(support)) return {lo, std::max(lo, support), false, 1.0};
  const double hi = std::max(model.truncation_radius(quad.truncation), lo);
  return {lo, hi, true, std::max(model.norm_median(), 1e-3)};
}

// Quadrature nodes in t on the axis, with pieces split at `breaks` (in t).
std::vector<quad::Node> axis_nodes(const Axis& axis, const std::vector<double>& breaks, int total_nodes) {
  std::vector<double> s_breaks;
  s_breaks.reserve(breaks.size());
  for (double b : breaks) s_breaks.push_back(axis.to_s(b));
  const auto pts = quad::normalize_breaks(std::move(s_breaks), axis.to_s(axis.lo), axis.to_s(axis.hi));
  const int pieces = static_cast<int>(pts.size()) - 1;
  const int per = std::max(kMinPieceNodes, (total_nodes + pieces - 1) / pieces);
  std::vector<quad::Node> s_nodes;
  s_nodes.reserve(static_cast<std::size_t>(per * pieces));
  for (int k = 0; k < pieces; ++k) quad::append_smoothstep_nodes(rule(per), pts[k], pts[k + 1], s_nodes);
  for (auto& nd : s_nodes) {
    nd.w *= axis.jacobian(nd.x);
    nd.x = axis.to_t(nd.x);
  }
  return s_nodes;
}

void require_angular(const RadialModel& p, const RadialModel& q) {
  if (p.dim() != q.dim()) {
    throw ConfigError("models for X and Y must share the dimension (" + std::to_string(p.dim()) + " vs " +
                      std::to_string(q.dim()) + ")");
  }
  if (q.dim() < 2) {
    throw DomainError("the angular reduction needs d >= 2; use the univariate uniform formulas for d = 1");
  }
  if (!q.nonincreasing()) throw DomainError("the predictive model q must be unimodal (nonincreasing generator)");
}

void require_scale(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale factor c must be positive and finite");
}

struct LPair {
  double l1;
  double l2;
};

LPair l_pair(const RadialModel& q, double log_cd, double c, double t1, double t2) {
  const double lq = q.log_generator(t2 * t2);
  const double z1 = q.generalized_inverse_log(lq + log_cd);
  const double z2 = q.upper_inverse_log(lq - log_cd);
  const double l1 = std::isinf(z1) ? -kInf : (t1 * t1 + t2 * t2 - c * c * z1) / (2.0 * t1 * t2);
  const double l2 = std::isinf(z2) ? kInf : (-t1 * t1 - c * c * t2 * t2 + z2) / (2.0 * c * t1 * t2);
#ifdef L1PRED_MUTATE_L2_SIGN
  return {l1, -l2};
#else
  return {l1, l2};
#endif
}

double find_root(const std::function<double(double)>& g, double a, double b) {
  double ga = g(a);
  double gb = g(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  boost::math::tools::eps_tolerance<double> tol(40);
  std::uintmax_t iters = 100;
  try {
    const auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
    return 0.5 * (lo + hi);
  } catch (const std::exception&) {
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (a + b);
      const double gm = g(mid);
      if ((gm < 0.0) == (ga < 0.0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  }
}

// Points on the Y axis where l1 or l2 crosses +-1; the clamped F_V has a
// kink there.
std::vector<double> inner_breaks(const RadialModel& q, double log_cd, double c, double t1, const Axis& axis) {
  std::vector<double> breaks;
  const double s_lo = axis.to_s(axis.lo);
  const double s_hi = axis.to_s(axis.hi);
  auto clamp_l = [](double v) { return std::clamp(v, -1e6, 1e6); };
  // cell midpoints plus both ends of the axis (just inside t2 = 0)
  const int n = kScanPoints + 2;
  std::vector<double> ts(n);
  std::vector<LPair> vals(n);
  for (int i = 0; i < n; ++i) {
    const double u = i == 0 ? 1e-9 : i == n - 1 ? 1.0 : (i - 0.5) / kScanPoints;
    ts[i] = axis.to_t(s_lo + (s_hi - s_lo) * u);
    vals[i] = l_pair(q, log_cd, c, t1, ts[i]);
  }
  for (int which = 0; which < 2; ++which) {
    for (double target : {-1.0, 1.0}) {
      auto g = [&](double t2) {
        const auto lp = l_pair(q, log_cd, c, t1, t2);
        return clamp_l(which == 0 ? lp.l1 : lp.l2) - target;
      };
      for (int i = 1; i < n; ++i) {
        const double a = clamp_l(which == 0 ? vals[i - 1].l1 : vals[i - 1].l2) - target;
        const double b = clamp_l(which == 0 ? vals[i].l1 : vals[i].l2) - target;
        if ((a < 0.0) != (b < 0.0)) breaks.push_back(find_root(g, ts[i - 1], ts[i]));
      }
    }
  }
  return breaks;
}

double conditional_loss_nodes(const RadialModel& q, double c, double t1, const QuadSpec& quad, int nodes) {
  if (t1 < kCenterHit) return central_scale_L1(q, c);
  const int d = q.dim();
  const double log_cd = d * std::log(c);
  const Axis axis = make_axis(q, 0.0, quad);
  auto breaks = inner_breaks(q, log_cd, c, t1, axis);
  double sum = 0.0;
  for (const auto& nd : axis_nodes(axis, breaks, nodes)) {
    if (!(nd.x > 0.0)) continue;
    const double w = q.norm_pdf(nd.x);
    if (w == 0.0) continue;
    const auto lp = l_pair(q, log_cd, c, t1, nd.x);
    const double diff = special::cross_angle_cdf(d, lp.l1) - special::cross_angle_cdf(d, lp.l2);
    sum += nd.w * w * diff;
  }
  return std::clamp(2.0 * sum, 0.0, 2.0);
}

std::vector<double> outer_breaks(const RadialModel& q, double c) {
  std::vector<double> breaks;
  const double m = q.support_radius();
  if (std::isfinite(m)) {
    breaks.push_back(std::abs(1.0 - c) * m);
    breaks.push_back((1.0 + c) * m);
  }
  return breaks;
}

double constant_risk_nodes(const RadialModel& p, const RadialModel& q, double c, const LossTransform& gamma,
                           const QuadSpec& quad, int nodes) {
  const Axis axis = make_axis(p, 0.0, quad);
  double sum = 0.0;
  for (const auto& nd : axis_nodes(axis, outer_breaks(q, c), nodes)) {
    const double w = p.norm_pdf(nd.x);
    if (w == 0.0) continue;
    sum += nd.w * w * gamma(conditional_loss_nodes(q, c, nd.x, quad, nodes));
  }
  return sum;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

}  // namespace

double l1_c(const RadialModel& q, double c, double t1, double t2) {
  require_scale(c);
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw DomainError("l1_c needs t1, t2 > 0");
  return l_pair(q, q.dim() * std::log(c), c, t1, t2).l1;
}

double l2_c(const RadialModel& q, double c, double t1, double t2) {
  require_scale(c);
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw DomainError("l2_c needs t1, t2 > 0");
  return l_pair(q, q.dim() * std::log(c), c, t1, t2).l2;
}

double conditional_loss(const RadialModel& q, double c, double t1, const QuadSpec& quad) {
  require_scale(c);
  if (q.dim() < 2) throw DomainError("the angular reduction needs d >= 2");
  if (!q.nonincreasing()) throw DomainError("the predictive model q must be unimodal (nonincreasing generator)");
  return conditional_loss_nodes(q, c, t1, quad, quad.nodes);
}

double constant_risk(const RadialModel& p, const RadialModel& q, double c, const LossTransform& gamma,
                     const QuadSpec& quad) {
  require_angular(p, q);
  require_scale(c);
  if (quad.nodes < 8) throw ConfigError("quadrature needs at least 8 nodes per axis");
  const double value = constant_risk_nodes(p, q, c, gamma, quad, quad.nodes);
  if (quad.check_convergence) {
    const double fine = constant_risk_nodes(p, q, c, gamma, quad, 2 * quad.nodes);
    if (!(std::abs(fine - value) < quad.convergence_tol)) {
      throw NumericalFailure("risk quadrature not converged at c = " + fmt(c) + ": " + fmt(value) + " with " +
                             std::to_string(quad.nodes) + " nodes vs " + fmt(fine) + " with " +
                             std::to_string(2 * quad.nodes));
    }
    return fine;
  }
  return value;
}

double plugin_risk_R1(const RadialModel& p, const RadialModel& q) {
  if (p.dim() != q.dim()) throw ConfigError("models for X and Y must share the dimension");
  if (!q.nonincreasing()) throw DomainError("the predictive model q must be unimodal (nonincreasing generator)");
  auto f = [&](double r) {
    const double w = p.norm_pdf(r);
    return w == 0.0 ? 0.0 : w * q.marginal_cdf(0.5 * r);
  };
  std::vector<double> breaks{0.0};
  if (std::isfinite(q.support_radius())) breaks.push_back(2.0 * q.support_radius());
  if (std::isfinite(p.support_radius())) {
    breaks.push_back(p.support_radius());
  } else {
    breaks.push_back(p.norm_median());
    breaks.push_back(kInf);
  }
  std::sort(breaks.begin(), breaks.end());
  const double hi = breaks.back();
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double b) { return b > hi; }), breaks.end());
  return 4.0 * quad::adaptive_pieces(f, breaks, 1e-13) - 2.0;
}

double risk_derivative_at_one(const RadialModel& p, const RadialModel& q, const LossTransform& gamma,
                              const QuadSpec& quad) {
  require_angular(p, q);
  if (!q.strictly_decreasing()) {
    throw DomainError("the derivative at c = 1 needs a strictly decreasing generator for q; '" + q.describe() +
                      "' has a plateau");
  }
  const int d = q.dim();
  const Axis outer = make_axis(p, 0.0, quad);
  double sum = 0.0;
  for (const auto& nd : axis_nodes(outer, {}, quad.nodes)) {
    const double t1 = nd.x;
    const double w = p.norm_pdf(t1);
    if (w == 0.0 || !(t1 > 0.0)) continue;
    const double h1 = 4.0 * q.marginal_cdf(0.5 * t1) - 2.0;
    const Axis inner = make_axis(q, 0.5 * t1, quad);
    double slope = 0.0;
    for (const auto& in : axis_nodes(inner, {}, quad.nodes)) {
      const double t2 = in.x;
      const double v = t1 / (2.0 * t2);
      if (!(v < 1.0)) continue;
      slope += in.w * q.norm_pdf(t2) * special::cross_angle_pdf(d, v) * t1 / t2;
    }
    sum += nd.w * w * gamma.derivative(h1) * slope;
  }
  return -sum;
}

RiskCurve risk_curve(const RadialModel& p, const RadialModel& q, const LossTransform& gamma,
                     const std::vector<double>& c_grid, const QuadSpec& quad, unsigned workers) {
  if (c_grid.empty()) throw ConfigError("c-grid is empty");
  for (std::size_t i = 1; i < c_grid.size(); ++i) {
    if (!(c_grid[i] > c_grid[i - 1])) throw ConfigError("c-grid must be strictly increasing");
  }
  require_angular(p, q);
  RiskCurve curve;
  curve.grid = c_grid;
  curve.values.assign(c_grid.size(), 0.0);
  curve.std_errs.assign(c_grid.size(), 0.0);
  curve.p = p.describe();
  curve.q = q.describe();
  curve.gamma = gamma.describe();
  curve.note = "quad_nodes=" + std::to_string(quad.nodes) + ",truncation=" + fmt(quad.truncation);
  parallel_for(
      c_grid.size(), [&](std::size_t i) { curve.values[i] = constant_risk(p, q, c_grid[i], gamma, quad); },
      workers == 0 ? default_workers() : workers);
  return curve;
}

SearchResult optimal_c(const RadialModel& p, const RadialModel& q, const LossTransform& gamma, const QuadSpec& quad,
                       const SearchSpec& search) {
  if (!(search.c_min > 0.0) || !(search.c_max > search.c_min)) throw ConfigError("invalid c search bracket");
  const auto grid = make_grid(search.c_min, search.c_max, search.step);
  const auto curve = risk_curve(p, q, gamma, grid, quad);
  return refine_grid_minimum([&](double c) { return constant_risk(p, q, c, gamma, quad); }, grid, curve.values,
                             search.tolerance);
}

double central_scale_L1(const RadialModel& q, double c) {
  require_scale(c);
  if (c == 1.0) return 0.0;
  const int d = q.dim();
  const double log_cd = d * std::log(c);
  auto sign_at = [&](double r) {
    const double a = q.log_generator(r * r);
    const double b = q.log_generator(r * r / (c * c)) - log_cd;
    if (a == b) return 0;
    return a > b ? 1 : -1;
  };
  std::vector<double> breaks;
  const double support = q.support_radius();
  if (std::isfinite(support)) {
    breaks.push_back(support);
    breaks.push_back(c * support);
  }
  const double reach = std::max(1.0, c) * q.truncation_radius(1e-14);
  constexpr int kScan = 400;
  double prev_r = reach * 1e-6;
  int prev = sign_at(prev_r);
  for (int i = 1; i <= kScan; ++i) {
    const double r = reach * std::pow(1e-6, 1.0 - static_cast<double>(i) / kScan);
    const int cur = sign_at(r);
    if (cur != prev && cur != 0 && prev != 0) {
      double lo = prev_r;
      double hi = r;
      for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        (sign_at(mid) == prev ? lo : hi) = mid;
      }
      breaks.push_back(0.5 * (lo + hi));
    }
    if (cur != 0) prev = cur;
    prev_r = r;
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(kInf);
  double total = 0.0;
  double a = 0.0;
  for (double b : breaks) {
    const double own = q.norm_cdf(b) - q.norm_cdf(a);
    const double scaled = q.norm_cdf(b / c) - q.norm_cdf(a / c);
    total += std::abs(own - scaled);
    a = b;
  }
  return std::clamp(total, 0.0, 2.0);
}

double dual_point_loss(std::span<const double> theta_hat, std::span<const double> theta) {
  return 4.0 * special::std_normal_cdf(0.5 * distance(theta_hat, theta)) - 2.0;
}

// ---------------------------------------------------------------------------

ConditionalLossTable::ConditionalLossTable(const RadialModel& q, double c, double t_max, int nodes,
                                           const QuadSpec& quad)
    : t_max_(t_max) {
  require_scale(c);
  if (!(t_max > 0.0)) throw ConfigError("table range must be positive");
  if (nodes < 4) throw ConfigError("table needs at least 4 nodes");
  at_zero_ = central_scale_L1(q, c);
  std::vector<double> cuts;
  for (double b : outer_breaks(q, c)) cuts.push_back(b);
  const auto pts = quad::normalize_breaks(cuts, 0.0, t_max);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    Piece piece{pts[k - 1], pts[k], std::vector<double>(static_cast<std::size_t>(nodes), 0.0)};
    std::vector<double> values(static_cast<std::size_t>(nodes));
    const double mid = 0.5 * (piece.lo + piece.hi);
    const double half = 0.5 * (piece.hi - piece.lo);
    for (int j = 0; j < nodes; ++j) {
      const double x = std::cos(std::numbers::pi * (j + 0.5) / nodes);
      values[j] = conditional_loss(q, c, mid + half * x, quad);
    }
    for (int i = 0; i < nodes; ++i) {
      double s = 0.0;
      for (int j = 0; j < nodes; ++j) s += values[j] * std::cos(std::numbers::pi * i * (j + 0.5) / nodes);
      piece.coeffs[i] = (i == 0 ? 1.0 : 2.0) * s / nodes;
    }
    pieces_.push_back(std::move(piece));
  }
}

double ConditionalLossTable::operator()(double t1) const {
  if (t1 < kCenterHit) return at_zero_;
  if (t1 > t_max_ * (1.0 + 1e-12)) throw DomainError("distance beyond the conditional-loss table range");
  auto it = std::find_if(pieces_.begin(), pieces_.end(), [&](const Piece& p) { return t1 <= p.hi; });
  const Piece& piece = it == pieces_.end() ? pieces_.back() : *it;
  const double x = std::clamp((2.0 * t1 - piece.lo - piece.hi) / (piece.hi - piece.lo), -1.0, 1.0);
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t i = piece.coeffs.size(); i-- > 1;) {
    const double b0 = 2.0 * x * b1 - b2 + piece.coeffs[i];
    b2 = b1;
    b1 = b0;
  }
  return std::clamp(x * b1 - b2 + piece.coeffs[0], 0.0, 2.0);
}

// ---------------------------------------------------------------------------

std::vector<double> restricted_distances(const RadialModel& p, const CenterEstimator& estimator, double lambda,
                                         const McSpec& mc) {
  if (!estimator.orthogonally_equivariant()) {
    throw DomainError("restricted risk reduces to ||theta|| only for orthogonally equivariant estimators; '" +
                      estimator.describe() + "' is not");
  }
  if (p.dim() < 2) throw DomainError("restricted risk needs d >= 2");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
  if (mc.n == 0) throw ConfigError("Monte Carlo sample size must be positive");
  const int d = p.dim();
  std::vector<double> out(mc.n);
  const std::size_t chunks = (mc.n + kChunkSize - 1) / kChunkSize;
  parallel_for(
      chunks,
      [&](std::size_t chunk) {
        auto rng = make_engine(mc.seed, chunk);
        Point x(d);
        Point est(d);
        Point theta(d, 0.0);
        theta[0] = lambda;
        const std::size_t end = std::min(mc.n, (chunk + 1) * kChunkSize);
        for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
          p.sample_offset(rng, x);
          x[0] += lambda;
          estimator.apply(x, est);
          out[i] = distance(est, theta);
        }
      },
      mc.workers == 0 ? default_workers() : mc.workers);
  return out;
}

std::vector<double> restricted_losses(const RadialModel& q, double c, const LossTransform& gamma,
                                      const std::vector<double>& distances, const McSpec& mc,
                                      const QuadSpec& quad) {
  const double t_max = std::max(*std::max_element(distances.begin(), distances.end()), 1e-6);
  const ConditionalLossTable table(q, c, t_max, mc.table_nodes, quad);
  std::vector<double> out(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) out[i] = gamma(table(distances[i]));
  return out;
}

McEstimate mean_and_std_err(const std::vector<double>& xs) {
  if (xs.empty()) throw ConfigError("no draws");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  return {mean, xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

McEstimate restricted_risk(const RadialModel& p, const RadialModel& q, double c, const CenterEstimator& estimator,
                           double lambda, const LossTransform& gamma, const McSpec& mc, const QuadSpec& quad) {
  require_angular(p, q);
  require_scale(c);
  const auto t1 = restricted_distances(p, estimator, lambda, mc);
  return mean_and_std_err(restricted_losses(q, c, gamma, t1, mc, quad));
}

PairedRisk restricted_risk_pair(const RadialModel& p, const RadialModel& q, double c_a, double c_b,
                                const CenterEstimator& estimator, double lambda, const LossTransform& gamma,
                                const McSpec& mc, const QuadSpec& quad) {
  require_angular(p, q);
  require_scale(c_a);
  require_scale(c_b);
  const auto t1 = restricted_distances(p, estimator, lambda, mc);
  const auto a = restricted_losses(q, c_a, gamma, t1, mc, quad);
  auto b = restricted_losses(q, c_b, gamma, t1, mc, quad);
  PairedRisk out{mean_and_std_err(a), mean_and_std_err(b), {}};
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = a[i] - b[i];
  out.difference = mean_and_std_err(b);
  return out;
}

namespace {

// Vertex of the parabola through three equally spaced grid points around
// the minimum, clipped to the bracket.
double parabolic_vertex(const std::vector<double>& grid, const std::vector<double>& values, std::size_t i) {
  if (i == 0 || i + 1 >= grid.size()) return grid[i];
  const double h = grid[i + 1] - grid[i];
  const double denom = values[i - 1] - 2.0 * values[i] + values[i + 1];
  if (!(denom > 0.0)) return grid[i];
  const double shift = 0.5 * h * (values[i - 1] - values[i + 1]) / denom;
  return std::clamp(grid[i] + shift, grid[i - 1], grid[i + 1]);
}

}  // namespace

C1Result c1_inf(const RadialModel& p, const RadialModel& q, const CenterEstimator& estimator,
                const std::vector<double>& lambda_grid, const LossTransform& gamma, const McSpec& mc,
                const SearchSpec& search, const QuadSpec& quad) {
  require_angular(p, q);
  if (lambda_grid.empty()) throw ConfigError("lambda grid is empty");
  if (estimator.kind() == CenterEstimator::Kind::mle_ball) {
    for (double lam : lambda_grid) {
      if (lam < 0.0 || lam > estimator.radius() + 1e-12) {
        throw ConfigError("lambda grid must lie in [0, m] for the c1 search, got " + fmt(lam));
      }
    }
  }
  const auto grid = make_grid(search.c_min, search.c_max, search.step);

  // Bootstrap resamples are stored as multiplicities so that each resampled
  // mean is a weighted sum over the shared per-draw losses.
  std::vector<std::vector<std::uint32_t>> counts(kBootstrapResamples, std::vector<std::uint32_t>(mc.n, 0));
  for (int b = 0; b < kBootstrapResamples; ++b) {
    auto rng = make_engine(mc.seed ^ 0xB007B007ULL, static_cast<std::uint64_t>(b));
    std::uniform_int_distribution<std::size_t> pick(0, mc.n - 1);
    for (std::size_t i = 0; i < mc.n; ++i) ++counts[b][pick(rng)];
  }

  C1Result result;
  result.c1 = kInf;
  for (double lambda : lambda_grid) {
    const auto t1 = restricted_distances(p, estimator, lambda, mc);
    std::vector<double> full(grid.size());
    std::vector<std::vector<double>> boot(kBootstrapResamples, std::vector<double>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto losses = restricted_losses(q, grid[k], gamma, t1, mc, quad);
      full[k] = mean_and_std_err(losses).value;
      for (int b = 0; b < kBootstrapResamples; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < losses.size(); ++i) s += counts[b][i] * losses[i];
        boot[b][k] = s / static_cast<double>(mc.n);
      }
    }
    const auto best = refine_grid_minimum(
        [&](double c) { return mean_and_std_err(restricted_losses(q, c, gamma, t1, mc, quad)).value; }, grid, full,
        search.tolerance);
    double m1 = 0.0;
    double m2 = 0.0;
    for (int b = 0; b < kBootstrapResamples; ++b) {
      const double cb = parabolic_vertex(grid, boot[b], argmin(boot[b]));
      m1 += cb;
      m2 += cb * cb;
    }
    m1 /= kBootstrapResamples;
    const double spread = std::sqrt(std::max(0.0, m2 / kBootstrapResamples - m1 * m1));
    result.per_lambda.push_back({lambda, best.c_star, best.risk, spread, best.boundary});
    result.boundary = result.boundary || best.boundary;
    if (best.c_star < result.c1) {
      result.c1 = best.c_star;
      result.spread = spread;
    }
  }
  return result;
}

}  // namespace l1pred
