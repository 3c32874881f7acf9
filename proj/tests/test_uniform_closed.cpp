#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "l1pred/errors.hpp"
#include "l1pred/oracle.hpp"
#include "l1pred/quadrature.hpp"
#include "l1pred/risk_engine.hpp"
#include "l1pred/special.hpp"
#include "l1pred/uniform_closed.hpp"

using namespace l1pred;

namespace {

// Both branches of the univariate risk for |X| ~ U(0, 1), written out.
double below_one(double c) {
  auto F = [](double s) { return std::clamp(s, 0.0, 1.0); };
  auto first_moment = [](double a, double b) {
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    return (b * b - a * a) / 2;
  };
  return 2 + (1 - c) * F(1 - c) - (1 + c) * F(1 + c) + first_moment(1 - c, 1 + c);
}

double above_one(double c) {
  auto F = [](double s) { return std::clamp(s, 0.0, 1.0); };
  auto first_moment = [](double a, double b) {
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    return (b * b - a * a) / 2;
  };
  return 2 + (1 - 1 / c) * F(c - 1) - (1 + 1 / c) * F(c + 1) + first_moment(c - 1, c + 1) / c;
}

double lens_area(double r, double delta) {
  return 2 * r * r * std::acos(delta / (2 * r)) - delta / 2 * std::sqrt(4 * r * r - delta * delta);
}

}  // namespace

TEST(BayesUniform, SingleObservation) {
  const std::vector<double> x{0.3};
  const auto dens = bayes_uniform_predictive(x, 1.0, 1.0);
  EXPECT_NEAR(dens.lower(), -0.7, 1e-15);
  EXPECT_NEAR(dens.upper(), 1.3, 1e-15);
}

TEST(BayesUniform, MidrangeCenteredWithHalfWidthB) {
  const std::vector<double> x{0.0, 1.0, 2.0};
  const auto dens = bayes_uniform_predictive(x, 2.0, 1.5);
  EXPECT_EQ(dens.center, 1.0);
  EXPECT_EQ(dens.half_width, 1.5);
}

TEST(BayesUniform, FailureBelowHalfWidth) {
  const std::vector<double> x{0.0, 0.1};
  try {
    bayes_uniform_predictive(x, 1.0, 0.1);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("2A - 4B = 1.6"), std::string::npos) << e.what();
  }
}

TEST(BayesUniform, InconsistentDataAndBadInput) {
  EXPECT_THROW(bayes_uniform_predictive(std::vector<double>{0.0, 3.0}, 1.0, 1.0), DomainError);
  EXPECT_THROW(bayes_uniform_predictive(std::vector<double>{}, 1.0, 1.0), ConfigError);
  EXPECT_THROW(bayes_uniform_predictive(std::vector<double>{0.0}, -1.0, 1.0), ConfigError);
}

TEST(BayesUniform, HalfWidthEqualsBAcrossCases) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double A = 0.5 + 2 * u(rng);
    const double B = A * (0.5 + 2 * u(rng));
    std::vector<double> x(1 + i % 5);
    for (double& v : x) v = -A + 2 * A * u(rng);
    EXPECT_EQ(bayes_uniform_predictive(x, A, B).half_width, B);
  }
}

TEST(BayesUniform, MatchesPosteriorMedianInIntermediateCase) {
  // A > B >= A/2: the set {y : P(|y - theta| <= B | x) >= 1/2} under a flat
  // prior, found on a theta grid, is the returned interval.
  const double A = 2.0;
  const double B = 1.2;
  const std::vector<double> x{0.4, 1.1, -0.3};
  const double lo = *std::max_element(x.begin(), x.end()) - A;
  const double hi = *std::min_element(x.begin(), x.end()) + A;
  auto prob = [&](double y) {
    const double a = std::max(lo, y - B);
    const double b = std::min(hi, y + B);
    return std::max(0.0, b - a) / (hi - lo);
  };
  double first = NAN;
  double last = NAN;
  for (double y = -5.0; y <= 5.0; y += 1e-4) {
    if (prob(y) >= 0.5) {
      if (std::isnan(first)) first = y;
      last = y;
    }
  }
  const auto dens = bayes_uniform_predictive(x, A, B);
  EXPECT_NEAR(first, dens.lower(), 2e-4);
  EXPECT_NEAR(last, dens.upper(), 2e-4);
}

TEST(Univariate, PlugInRiskForUniformInterval) {
  EXPECT_NEAR(univariate_uniform_risk(AbsLaw::uniform(1.0), 1.0), 0.5, 1e-12);
}

TEST(Univariate, BranchesAgreeAtOne) {
  EXPECT_NEAR(below_one(1.0), above_one(1.0), 1e-15);
  // the slopes differ across 1, so the gap between branches is linear in h
  for (double h : {1e-4, 1e-6, 1e-8, 1e-11}) {
    EXPECT_LE(std::abs(below_one(1.0 - h) - above_one(1.0 + h)), 2 * h + 1e-15) << h;
    EXPECT_LE(std::abs(below_one(1.0 + h) - above_one(1.0 + h)), 2 * h + 1e-15) << h;
  }
  const auto law = AbsLaw::uniform(1.0);
  for (double c : {0.3, 0.9, 1.0 - 1e-8}) EXPECT_NEAR(univariate_uniform_risk(law, c), below_one(c), 1e-12);
  for (double c : {1.0 + 1e-8, 1.4, 2.7}) EXPECT_NEAR(univariate_uniform_risk(law, c), above_one(c), 1e-12);
}

TEST(Univariate, TinyScaleAgreesWithOracle) {
  const double c = 1e-6;
  const double value = univariate_uniform_risk(AbsLaw::uniform(1.0), c);
  const auto u1 = RadialModel::uniform_ball(1, 1.0);
  const auto est = oracle::mc_risk(u1, u1, CenterEstimator::raw(), c, Point{0.0}, LossTransform::identity(), 2000,
                                   1000, 3);
  EXPECT_NEAR(est.value, value, 3 * est.std_err + 1e-9);
}

TEST(Univariate, RescalingToUnitTarget) {
  // X ~ U(-A, A), Y ~ U(-B, B) is the unit problem with |X| / B.
  const double A = 3.0;
  const double B = 2.0;
  for (double c : {0.6, 1.0, 1.7}) {
    EXPECT_NEAR(univariate_uniform_risk(AbsLaw::uniform(A), c, B), univariate_uniform_risk(AbsLaw::uniform(A / B), c),
                1e-12);
  }
}

TEST(Univariate, NonincreasingDensityGivesPlugInOptimality) {
  const std::vector<AbsLaw> laws{AbsLaw::uniform(1.0), AbsLaw::from_model(RadialModel::normal(1, 1.0)),
                                 AbsLaw::midrange(3, 1.5)};
  for (const auto& law : laws) {
    const double r1 = univariate_uniform_risk(law, 1.0);
    for (double c = 0.2; c <= 4.0; c += 0.05) EXPECT_GE(univariate_uniform_risk(law, c), r1 - 1e-12) << c;
  }
}

TEST(Univariate, SufficientConditionChecker) {
  const auto a1 = check_plugin_optimality(AbsLaw::uniform(1.0));
  EXPECT_EQ(a1.mean_condition, ConditionStatus::holds);
  EXPECT_EQ(a1.monotone_density, ConditionStatus::holds);
  EXPECT_NEAR(a1.conditional_mean, 0.5, 1e-10);
  EXPECT_TRUE(a1.sufficient());

  // conditional mean exactly 1 sits on the boundary of the grid check
  const auto a3 = check_plugin_optimality(AbsLaw::uniform(3.0));
  EXPECT_NEAR(a3.conditional_mean, 1.0, 1e-10);
  EXPECT_EQ(a3.mean_condition, ConditionStatus::undetermined);
  EXPECT_EQ(a3.monotone_density, ConditionStatus::holds);

  const auto ball = check_plugin_optimality(AbsLaw::from_model(RadialModel::uniform_ball(3, 1.0)));
  EXPECT_EQ(ball.monotone_density, ConditionStatus::fails);
}

TEST(Midrange, DensityIntegratesToOne) {
  for (int n = 1; n <= 6; ++n) {
    const auto law = AbsLaw::midrange(n, 2.0);
    EXPECT_NEAR(quad::adaptive(law.pdf, 0.0, 2.0, 1e-13), 1.0, 1e-10) << n;
  }
}

TEST(Midrange, MatchesSimulatedOrderStatistics) {
  std::mt19937_64 rng(21);
  const double A = 1.5;
  for (int n : {2, 3, 5}) {
    std::uniform_real_distribution<double> u(-A, A);
    const std::size_t draws = 100000;
    std::vector<double> dev(draws);
    std::vector<double> x(n);
    for (auto& v : dev) {
      for (double& xi : x) xi = u(rng);
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      v = std::abs(0.5 * (*lo + *hi));
    }
    std::sort(dev.begin(), dev.end());
    const auto law = AbsLaw::midrange(n, A);
    double ks = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const double f = law.cdf(dev[i]);
      ks = std::max({ks, f - static_cast<double>(i) / draws, static_cast<double>(i + 1) / draws - f});
    }
    EXPECT_LT(ks, 1.63 / std::sqrt(static_cast<double>(draws))) << n;
  }
}

TEST(BallIntersection, TangentBallsAreDisjoint) {
  for (double c : {0.5, 1.0, 2.0}) EXPECT_NEAR(ball_intersection_volume(3, 1.0 + c, c), 0.0, 1e-14);
}

TEST(BallIntersection, PlanarLens) {
  EXPECT_NEAR(ball_intersection_volume(2, 1.0, 1.0), lens_area(1.0, 1.0), 1e-12);
  EXPECT_NEAR(ball_intersection_volume(2, 1.0, 1.0), 2 * std::numbers::pi / 3 - std::sqrt(3.0) / 2, 1e-12);
  for (double delta : {0.1, 0.7, 1.5, 1.99}) EXPECT_NEAR(ball_intersection_volume(2, delta, 1.0), lens_area(1.0, delta), 1e-12);
}

TEST(BallIntersection, CoincidentLimit) {
  EXPECT_NEAR(ball_intersection_volume(3, 1e-9, 1.0), 4 * std::numbers::pi / 3, 1e-6);
  EXPECT_THROW(ball_intersection_volume(3, 0.0, 1.0), DomainError);
}

TEST(BallIntersection, ScalingSymmetry) {
  for (int d : {2, 3, 5}) {
    for (double c : {0.4, 1.3, 2.5}) {
      for (double x = 0.1; x < 1 + c; x += 0.2) {
        EXPECT_NEAR(ball_intersection_volume(d, x, c), std::pow(c, d) * ball_intersection_volume(d, x / c, 1 / c), 1e-12)
            << d << " " << c << " " << x;
      }
    }
  }
}

TEST(Multivariate, UniformPlugInRisk) {
  const auto law = AbsLaw::from_model(RadialModel::uniform_ball(3, 1.0));
  EXPECT_NEAR(multivariate_uniform_risk(law, 3, 1.0), 17.0 / 16.0, 1e-10);
}

TEST(Multivariate, PlugInReduction) {
  for (int d : {2, 4}) {
    const auto x = RadialModel::normal(d, 0.7);
    const double expected = quad::adaptive(
        [&](double r) { return x.norm_pdf(r) * (4 * special::ball_marginal_cdf(d, r / 2) - 2); }, 0.0, INFINITY, 1e-13);
    EXPECT_NEAR(multivariate_uniform_risk(AbsLaw::from_model(x), d, 1.0), expected, 1e-9);
  }
}

TEST(Multivariate, MatchesPiecewiseClosedFormInThreeDimensions) {
  const auto law = AbsLaw::from_model(RadialModel::uniform_ball(3, 1.0));
  for (double c = 0.2; c < 4.0; c += 0.05) EXPECT_NEAR(multivariate_uniform_risk(law, 3, c), uniform_d3_closed_risk(c), 1e-8);
}

TEST(Multivariate, AgreesWithAngularQuadrature) {
  const auto x = RadialModel::normal(3, 1.0);
  const auto y = RadialModel::uniform_ball(3, 1.0);
  for (double c : {0.7, 1.0, 1.6}) {
    EXPECT_NEAR(multivariate_uniform_risk(AbsLaw::from_model(x), 3, c),
                constant_risk(x, y, c, LossTransform::identity()), 1e-6);
  }
}

TEST(Multivariate, NormalPlugInOptimal) {
  for (int d = 2; d <= 5; ++d) {
    const auto law = AbsLaw::from_model(RadialModel::normal(d, 1.0));
    const double r1 = multivariate_uniform_risk(law, d, 1.0);
    for (double c = 0.2; c <= 4.0; c += 0.1) EXPECT_LE(r1, multivariate_uniform_risk(law, d, c) + 1e-12) << d << " " << c;
  }
}

TEST(ClosedFormThreeDimensions, BranchValuesAndShape) {
  EXPECT_NEAR(uniform_d3_closed_risk(1.0), 17.0 / 16.0, 1e-15);
  EXPECT_NEAR((-1.0 + 18.0 - 32.0 + 32.0) / 16.0, 17.0 / 16.0, 1e-15);
  EXPECT_NEAR(uniform_d3_closed_risk(2.0), 1.75, 1e-15);
  EXPECT_NEAR(2.0 * (1.0 - 1.0 / 8.0), 1.75, 1e-15);
  double prev = uniform_d3_closed_risk(0.01);
  for (double c = 0.02; c < 1.0; c += 0.01) {
    const double r = uniform_d3_closed_risk(c);
    EXPECT_LT(r, prev);
    prev = r;
  }
  prev = uniform_d3_closed_risk(1.0);
  for (double c = 1.01; c < 4.0; c += 0.01) {
    const double r = uniform_d3_closed_risk(c);
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(Hypergeometric, PlanarValues) {
  EXPECT_NEAR(normal_R1_hypergeometric(2, 1.0), 2.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(normal_R1_hypergeometric(2, 2.0), 2.0 / 3.0, 1e-12);
}

TEST(Hypergeometric, AgreesWithQuadrature) {
  EXPECT_NEAR(normal_R1_hypergeometric(3, 1.0),
              plugin_risk_R1(RadialModel::normal(3, 1.0), RadialModel::normal(3, 1.0)), 1e-8);
}

TEST(Hypergeometric, SmallRatioFallsBackToQuadrature) {
  try {
    normal_R1_hypergeometric(3, 0.25);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("r > 1/4"), std::string::npos);
  }
  const double r = 0.2;
  EXPECT_NEAR(normal_R1(3, r), plugin_risk_R1(RadialModel::normal(3, 1.0), RadialModel::normal(3, r)), 1e-12);
  EXPECT_NEAR(normal_R1(2, r), 2.0 / std::sqrt(1.0 + 4.0 * r), 1e-8);
}
