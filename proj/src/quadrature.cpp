#include "l1pred/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "l1pred/errors.hpp"

namespace l1pred::quad {

namespace {

// Returns (P_n(x), P_n'(x)).
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendre::GaussLegendre(std::size_t n) : nodes_(n), weights_(n) {
  if (n == 0) throw ConfigError("Gauss-Legendre rule needs at least one node");
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

void append_smoothstep_nodes(const GaussLegendre& rule, double a, double b, std::vector<Node>& out) {
  if (!(b > a)) return;
  const double len = b - a;
  const auto xs = rule.nodes();
  const auto ws = rule.weights();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = 0.5 * (xs[i] + 1.0);
    const double jac = 6.0 * u * (1.0 - u);
    out.push_back({a + len * u * u * (3.0 - 2.0 * u), 0.5 * ws[i] * len * jac});
  }
}

double integrate_pieces(const std::function<double(double)>& f, std::span<const double> breaks,
                        const GaussLegendre& rule) {
  std::vector<Node> nodes;
  nodes.reserve(rule.size() * (breaks.size() > 0 ? breaks.size() - 1 : 0));
  for (std::size_t k = 1; k < breaks.size(); ++k) {
    append_smoothstep_nodes(rule, breaks[k - 1], breaks[k], nodes);
  }
  double sum = 0.0;
  for (const auto& nd : nodes) sum += nd.w * f(nd.x);
  return sum;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                double* error_estimate) {
  if (a == b) {
    if (error_estimate) *error_estimate = 0.0;
    return 0.0;
  }
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel_tol, &err);
  if (error_estimate) *error_estimate = err;
  return value;
}

std::vector<double> normalize_breaks(std::vector<double> breaks, double lo, double hi) {
  std::vector<double> out;
  out.push_back(lo);
  std::sort(breaks.begin(), breaks.end());
  for (double b : breaks) {
    if (!(b > lo) || !(b < hi)) continue;
    if (b - out.back() <= 1e-14 * std::max(1.0, std::abs(b))) continue;
    out.push_back(b);
  }
  if (hi - out.back() <= 1e-14 * std::max(1.0, std::abs(hi)) && out.size() > 1) out.pop_back();
  out.push_back(hi);
  return out;
}

double adaptive_pieces(const std::function<double(double)>& f, std::vector<double> breaks,
                       double rel_tol) {
  if (breaks.size() < 2) return 0.0;
  const auto pts = normalize_breaks(
      std::vector<double>(breaks.begin() + 1, breaks.end() - 1), breaks.front(), breaks.back());
  double sum = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) sum += adaptive(f, pts[k - 1], pts[k], rel_tol);
  return sum;
}

}  // namespace l1pred::quad
