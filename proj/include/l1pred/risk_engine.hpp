#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "l1pred/estimator.hpp"
#include "l1pred/loss_transform.hpp"
#include "l1pred/radial_model.hpp"
#include "l1pred/search.hpp"

namespace l1pred {

struct QuadSpec {
  int nodes = 256;               // Gauss-Legendre nodes per radial axis, shared among its pieces
  double truncation = 1e-10;     // tail mass dropped on unbounded axes
  bool check_convergence = false;
  double convergence_tol = 1e-7;  // |R(nodes) - R(2 nodes)| bound when checking
};

struct McSpec {
  std::size_t n = 100000;
  std::uint64_t seed = 20240601;
  unsigned workers = 0;  // 0 = hardware concurrency
  int table_nodes = 96;  // Chebyshev nodes for the conditional-loss table
};

struct McEstimate {
  double value = 0.0;
  double std_err = 0.0;
};

struct RiskCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> std_errs;
  std::string p;
  std::string q;
  std::string gamma;
  std::string note;  // estimator, lambda, budgets
};

/// Cosine thresholds of the two level sets that make up the L1 loss when
/// ||theta_hat - theta|| = t1 and ||Y - theta|| = t2. At c = 1 they are
/// t1/(2 t2) and -t1/(2 t2).
double l1_c(const RadialModel& q, double c, double t1, double t2);
double l2_c(const RadialModel& q, double c, double t1, double t2);

/// Loss of the scale-c plug-in density whose center is at distance t1 from
/// theta, before the loss transform is applied. Routes t1 < 1e-12 to
/// central_scale_L1.
double conditional_loss(const RadialModel& q, double c, double t1, const QuadSpec& quad = {});

/// Risk of the scale-c plug-in density centered at X (constant in theta).
double constant_risk(const RadialModel& p, const RadialModel& q, double c, const LossTransform& gamma,
                     const QuadSpec& quad = {});

/// Risk of the plain plug-in density (c = 1, gamma = identity) through the
/// first-coordinate marginal of Y: 4 E F_{Y1}(||X||/2) - 2. Accepts d = 1.
double plugin_risk_R1(const RadialModel& p, const RadialModel& q);

/// Right derivative of constant_risk in c at c = 1. Requires strictly
/// decreasing q.
double risk_derivative_at_one(const RadialModel& p, const RadialModel& q, const LossTransform& gamma,
                              const QuadSpec& quad = {});

RiskCurve risk_curve(const RadialModel& p, const RadialModel& q, const LossTransform& gamma,
                     const std::vector<double>& c_grid, const QuadSpec& quad = {}, unsigned workers = 0);

SearchResult optimal_c(const RadialModel& p, const RadialModel& q, const LossTransform& gamma,
                       const QuadSpec& quad = {}, const SearchSpec& search = {});

/// L1 distance between q and its scale-c version about the same center.
double central_scale_L1(const RadialModel& q, double c);

/// 4 Phi(||theta_hat - theta|| / 2) - 2.
double dual_point_loss(std::span<const double> theta_hat, std::span<const double> theta);

/// Chebyshev interpolant of t1 -> conditional_loss(q, c, t1) on [0, t_max],
/// split at the kinks of finite-support q.
class ConditionalLossTable {
 public:
  ConditionalLossTable(const RadialModel& q, double c, double t_max, int nodes, const QuadSpec& quad = {});
  double operator()(double t1) const;
  double t_max() const { return t_max_; }

 private:
  struct Piece {
    double lo;
    double hi;
    std::vector<double> coeffs;
  };
  std::vector<Piece> pieces_;
  double t_max_;
  double at_zero_;
};

/// Distances ||theta_hat(X) - theta|| for n draws X ~ p(||x - theta||^2)
/// with theta = (lambda, 0, ..., 0). The offsets X - theta depend only on
/// the seed, so different lambda share random numbers.
std::vector<double> restricted_distances(const RadialModel& p, const CenterEstimator& estimator, double lambda,
                                         const McSpec& mc);

/// Per-draw transformed losses gamma(H_c(t1_i)).
std::vector<double> restricted_losses(const RadialModel& q, double c, const LossTransform& gamma,
                                      const std::vector<double>& distances, const McSpec& mc,
                                      const QuadSpec& quad = {});

McEstimate mean_and_std_err(const std::vector<double>& xs);

/// Risk of the scale-c density centered at theta_hat(X) at any theta with
/// ||theta|| = lambda.
McEstimate restricted_risk(const RadialModel& p, const RadialModel& q, double c, const CenterEstimator& estimator,
                           double lambda, const LossTransform& gamma, const McSpec& mc = {},
                           const QuadSpec& quad = {});

struct PairedRisk {
  McEstimate a;
  McEstimate b;
  McEstimate difference;  // a - b on common draws
};

PairedRisk restricted_risk_pair(const RadialModel& p, const RadialModel& q, double c_a, double c_b,
                                const CenterEstimator& estimator, double lambda, const LossTransform& gamma,
                                const McSpec& mc = {}, const QuadSpec& quad = {});

struct LambdaOptimum {
  double lambda;
  double c_star;
  double risk;
  double spread;  // standard deviation of c_star over bootstrap resamples
  bool boundary;
};

struct C1Result {
  double c1 = 1.0;
  double spread = 0.0;  // bootstrap spread at the minimizing lambda
  bool boundary = false;
  std::vector<LambdaOptimum> per_lambda;
};

inline constexpr int kBootstrapResamples = 8;

/// Minimizes the restricted risk over c for each lambda and returns the
/// infimum of the minimizers.
C1Result c1_inf(const RadialModel& p, const RadialModel& q, const CenterEstimator& estimator,
                const std::vector<double>& lambda_grid, const LossTransform& gamma, const McSpec& mc = {},
                const SearchSpec& search = {}, const QuadSpec& quad = {});

}  // namespace l1pred
