#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace l1pred::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t n);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct Node {
  double x;
  double w;
};

/// Nodes for the integral over [a, b] after the substitution
/// x = a + (b - a) (3u^2 - 2u^3). The map has vanishing derivative at both
/// ends, which turns square-root endpoint behaviour into a smooth integrand.
void append_smoothstep_nodes(const GaussLegendre& rule, double a, double b, std::vector<Node>& out);

/// Integrate f over [breaks.front(), breaks.back()] piece by piece, splitting
/// at every interior break, with `rule` applied to each piece.
double integrate_pieces(const std::function<double(double)>& f, std::span<const double> breaks,
                        const GaussLegendre& rule);

/// Adaptive Gauss-Kronrod (15 point) on [a, b]; either end may be infinite.
double adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                double* error_estimate = nullptr);

/// Adaptive integration split at the given breaks (sorted, finite interior
/// points are honoured; the ends may be infinite).
double adaptive_pieces(const std::function<double(double)>& f, std::vector<double> breaks,
                       double rel_tol = 1e-12);

/// Sort, clip to [lo, hi] and deduplicate break points, keeping lo and hi.
std::vector<double> normalize_breaks(std::vector<double> breaks, double lo, double hi);

}  // namespace l1pred::quad
