#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "l1pred/errors.hpp"
#include "l1pred/oracle.hpp"
#include "l1pred/risk_engine.hpp"
#include "l1pred/special.hpp"

using namespace l1pred;

namespace {

Point along(int d, double r) {
  Point p(d, 0.0);
  p[0] = r;
  return p;
}

Point random_rotation_of(const Point& v, std::mt19937_64& rng) {
  // norm-preserving image of v: rotate v onto a uniformly random direction
  std::normal_distribution<double> g;
  Point u(v.size());
  double n2 = 0.0;
  for (double& x : u) {
    x = g(rng);
    n2 += x * x;
  }
  double len = 0.0;
  for (double x : v) len += x * x;
  const double scale = std::sqrt(len / n2);
  for (double& x : u) x *= scale;
  return u;
}

}  // namespace

TEST(MixtureLoss, IdenticalDensitiesGiveExactZero) {
  const auto q = RadialModel::normal(3, 1.0);
  const Point theta{0.2, -0.1, 0.4};
  const auto est = oracle::mc_l1_loss(q, theta, theta, 1.0, 2000, 5);
  EXPECT_EQ(est.value, 0.0);
  EXPECT_EQ(est.std_err, 0.0);
}

TEST(MixtureLoss, ShiftedUniformInterval) {
  const auto q = RadialModel::uniform_ball(1, 1.0);
  const auto est = oracle::mc_l1_loss(q, Point{0.0}, Point{0.5}, 1.0, 100000, 6);
  EXPECT_NEAR(est.value, 0.5, 3 * est.std_err + 1e-12);
  EXPECT_LT(est.std_err, 0.01);
}

TEST(MixtureLoss, CentralScaleLossInThreeDimensions) {
  const auto q = RadialModel::normal(3, 1.0);
  const Point theta{0.5, 0.5, 0.5};
  const auto est = oracle::mc_l1_loss(q, theta, theta, 1.5, 100000, 7);
  EXPECT_NEAR(est.value, central_scale_L1(q, 1.5), 3 * est.std_err);
}

TEST(MixtureLoss, AgreesWithConditionalLoss) {
  const auto u3 = RadialModel::uniform_ball(3, 1.0);
  const auto t5 = RadialModel::normal_mixture(3, InverseGammaMixing{2.5, 2.5});
  for (const auto* q : {&u3, &t5}) {
    for (double c : {0.8, 1.3}) {
      const auto est = oracle::mc_l1_loss(*q, Point(3, 0.0), along(3, 0.6), c, 50000, 8);
      EXPECT_NEAR(est.value, conditional_loss(*q, c, 0.6), 3 * est.std_err) << q->describe() << " " << c;
    }
  }
}

TEST(MixtureLoss, EstimatesStayInRange) {
  const auto q = RadialModel::normal(2, 1.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_real_distribution<double> sc(0.1, 5.0);
  for (int i = 0; i < 30; ++i) {
    const auto est = oracle::mc_l1_loss(q, Point{u(rng), u(rng)}, Point{u(rng), u(rng)}, sc(rng), 1000, i);
    EXPECT_GE(est.value, 0.0);
    EXPECT_LE(est.value, 2.0);
  }
}

TEST(MixtureLoss, RejectsSmallSamplesAndBadInput) {
  const auto q = RadialModel::normal(2, 1.0);
  EXPECT_THROW(oracle::mc_l1_loss(q, Point{0.0, 0.0}, Point{0.0, 0.0}, 1.0, 999, 1), ConfigError);
  EXPECT_THROW(oracle::mc_l1_loss(q, Point{0.0}, Point{0.0, 0.0}, 1.0, 1000, 1), ConfigError);
  EXPECT_THROW(oracle::mc_l1_loss(q, Point{0.0, 0.0}, Point{0.0, 0.0}, 0.0, 1000, 1), DomainError);
}

TEST(MixtureLoss, TranslationAndRotationInvariance) {
  const auto q = RadialModel::normal(3, 1.0);
  const Point theta{0.0, 0.0, 0.0};
  const Point center{0.9, 0.0, 0.0};
  const auto base = oracle::mc_l1_loss(q, theta, center, 1.2, 100000, 10);

  const Point shift{3.0, -2.0, 5.0};
  Point theta_s(3);
  Point center_s(3);
  for (int i = 0; i < 3; ++i) {
    theta_s[i] = theta[i] + shift[i];
    center_s[i] = center[i] + shift[i];
  }
  const auto moved = oracle::mc_l1_loss(q, theta_s, center_s, 1.2, 100000, 11);
  EXPECT_NEAR(moved.value, base.value, 3 * std::hypot(moved.std_err, base.std_err));

  std::mt19937_64 rng(12);
  for (int k = 0; k < 3; ++k) {
    const auto rotated = oracle::mc_l1_loss(q, theta, random_rotation_of(center, rng), 1.2, 100000, 20 + k);
    EXPECT_NEAR(rotated.value, base.value, 3 * std::hypot(rotated.std_err, base.std_err));
  }
}

TEST(OverlapRoute, LimitsAndAgreement) {
  const auto q = RadialModel::uniform_ball(2, 1.0);
  EXPECT_NEAR(oracle::overlap_route_loss(q, Point{0.0, 0.0}, Point{0.0, 0.0}, 1.0, 5000, 1).value, 0.0, 1e-12);
  EXPECT_NEAR(oracle::overlap_route_loss(q, Point{0.0, 0.0}, Point{3.0, 0.0}, 1.0, 5000, 1).value, 2.0, 1e-12);

  const auto n = RadialModel::normal(2, 1.0);
  const auto a = oracle::overlap_route_loss(n, Point{0.0, 0.0}, Point{0.7, 0.2}, 1.4, 100000, 2);
  const auto b = oracle::mc_l1_loss(n, Point{0.0, 0.0}, Point{0.7, 0.2}, 1.4, 100000, 3);
  EXPECT_NEAR(a.value, b.value, 3 * std::hypot(a.std_err, b.std_err));
}

TEST(GridLoss, ReferenceValues) {
  EXPECT_NEAR(oracle::grid_l1_loss(RadialModel::uniform_ball(1, 1.0), Point{0.0}, Point{0.5}, 1.0), 0.5, 1e-6);
  const auto n2 = RadialModel::normal(2, 1.0);
  EXPECT_NEAR(oracle::grid_l1_loss(n2, Point{0.3, 0.3}, Point{0.3, 0.3}, 1.0), 0.0, 1e-8);
  const double dual = 4 * special::std_normal_cdf(0.5) - 2;
  EXPECT_NEAR(dual, 0.765849845, 1e-9);
  EXPECT_NEAR(oracle::grid_l1_loss(n2, Point{0.0, 0.0}, Point{1.0, 0.0}, 1.0), dual, 1e-6);
}

TEST(GridLoss, AgreesWithConditionalLossInThePlane) {
  const auto t = RadialModel::normal_mixture(2, InverseGammaMixing{2.0, 2.0});
  for (double c : {0.7, 1.6}) {
    EXPECT_NEAR(oracle::grid_l1_loss(t, Point{0.0, 0.0}, Point{0.0, 1.1}, c), conditional_loss(t, c, 1.1), 1e-6) << c;
  }
}

TEST(GridLoss, LimitedToTwoDimensions) {
  EXPECT_THROW(oracle::grid_l1_loss(RadialModel::normal(3, 1.0), Point(3, 0.0), Point(3, 0.0), 1.0), DomainError);
}

TEST(MonteCarloRisk, ReferenceValues) {
  const auto n2 = RadialModel::normal(2, 1.0);
  const auto raw = CenterEstimator::raw();
  const auto g = LossTransform::identity();
  const auto a = oracle::mc_risk(n2, n2, raw, 1.0, Point{0.0, 0.0}, g, 20000, 1000, 30);
  EXPECT_NEAR(a.value, 2.0 / std::sqrt(5.0), 3 * a.std_err);

  const auto u3 = RadialModel::uniform_ball(3, 1.0);
  const auto b = oracle::mc_risk(u3, u3, raw, 1.0, Point(3, 0.0), g, 20000, 1000, 31);
  EXPECT_NEAR(b.value, 17.0 / 16.0, 3 * b.std_err);
}

TEST(MonteCarloRisk, LocationInvarianceOfTheRawCenter) {
  const auto n3 = RadialModel::normal(3, 1.0);
  const auto raw = CenterEstimator::raw();
  const auto g = LossTransform::identity();
  const auto a = oracle::mc_risk(n3, n3, raw, 1.2, Point{0.0, 0.0, 0.0}, g, 10000, 1000, 40);
  const auto b = oracle::mc_risk(n3, n3, raw, 1.2, Point{7.0, 0.0, 0.0}, g, 10000, 1000, 41);
  EXPECT_NEAR(a.value, b.value, 3 * std::hypot(a.std_err, b.std_err));
}

TEST(MonteCarloRisk, IndependentOfWorkerCount) {
  const auto n2 = RadialModel::normal(2, 1.0);
  const auto raw = CenterEstimator::raw();
  const auto g = LossTransform::power(2.0);
  const auto one = oracle::mc_risk(n2, n2, raw, 1.3, Point{0.0, 0.0}, g, 2000, 1000, 50, 1);
  const auto four = oracle::mc_risk(n2, n2, raw, 1.3, Point{0.0, 0.0}, g, 2000, 1000, 50, 4);
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.std_err, four.std_err);
}

TEST(MonteCarloRisk, RejectsMismatchedModels) {
  EXPECT_THROW(oracle::mc_risk(RadialModel::normal(2, 1.0), RadialModel::normal(3, 1.0), CenterEstimator::raw(), 1.0,
                               Point{0.0, 0.0}, LossTransform::identity(), 1000, 1000, 1),
               ConfigError);
  EXPECT_THROW(oracle::mc_risk(RadialModel::normal(2, 1.0), RadialModel::normal(2, 1.0), CenterEstimator::raw(), 1.0,
                               Point{0.0, 0.0}, LossTransform::identity(), 10, 1000, 1),
               ConfigError);
}
