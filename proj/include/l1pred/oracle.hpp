#pragma once

// Brute-force evaluation of the L1 loss and risk straight from their
// definitions. Nothing here uses the angular reduction or any closed-form
// risk, so the results can be used to check those.

#include <cstdint>
#include <span>
#include <string>

#include "l1pred/estimator.hpp"
#include "l1pred/loss_transform.hpp"
#include "l1pred/radial_model.hpp"

namespace l1pred::oracle {

enum class Method { importance_mixture, overlap, radial_grid, exact };

struct LossEstimate {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t n = 0;
  Method method = Method::exact;
};

/// Integral of |q(||y - theta||^2) - c^-d q(||y - center||^2 / c^2)| by
/// sampling y from the equal mixture of the two densities.
LossEstimate mc_l1_loss(const RadialModel& q, std::span<const double> theta, std::span<const double> center, double c,
                        std::size_t n, std::uint64_t seed);

/// 2 - 2 OVL with OVL estimated from draws of q_theta.
LossEstimate overlap_route_loss(const RadialModel& q, std::span<const double> theta, std::span<const double> center,
                                double c, std::size_t n, std::uint64_t seed);

/// Risk at theta: n_x draws of X, each scored by gamma of an n_y-draw
/// mixture estimate of the loss. The standard error adds the between-draw
/// variance and the propagated within-draw variance.
LossEstimate mc_risk(const RadialModel& p, const RadialModel& q, const CenterEstimator& estimator, double c,
                     std::span<const double> theta, const LossTransform& gamma, std::size_t n_x, std::size_t n_y,
                     std::uint64_t seed, unsigned workers = 0);

struct GridSpec {
  double rel_tol = 1e-9;
  double tail_mass = 1e-13;
};

/// Deterministic nested adaptive integration of the absolute difference,
/// d <= 2.
double grid_l1_loss(const RadialModel& q, std::span<const double> theta, std::span<const double> center, double c,
                    const GridSpec& grid = {});

std::string to_string(Method m);

}  // namespace l1pred::oracle
