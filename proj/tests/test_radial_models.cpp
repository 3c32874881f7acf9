#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "l1pred/errors.hpp"
#include "l1pred/estimator.hpp"
#include "l1pred/loss_transform.hpp"
#include "l1pred/quadrature.hpp"
#include "l1pred/radial_model.hpp"
#include "l1pred/rng.hpp"
#include "l1pred/search.hpp"
#include "l1pred/special.hpp"

using namespace l1pred;

namespace {

std::vector<RadialModel> builtin_models() {
  return {
      make_normal(1, 1.0),
      make_normal(2, 1.0),
      make_normal(3, 2.5),
      make_normal(7, 0.3),
      make_uniform_ball(1, 1.0),
      make_uniform_ball(3, 1.0),
      make_uniform_ball(5, 2.0),
      make_scale_mixture_normal(2, PointMassMixing{{1.0, 4.0}, {0.5, 0.5}}),
      make_scale_mixture_normal(3, InverseGammaMixing{2.5, 2.5}),
      make_scale_mixture_normal(1, InverseGammaMixing{0.5, 0.5}),
      make_scale_mixture_normal(5, InverseGammaMixing{0.5, 0.5}),
  };
}

double norm_mass(const RadialModel& m) {
  auto f = [&](double r) { return m.norm_pdf(r); };
  const double mid = m.norm_median();
  const double hi = m.support_radius();
  return quad::adaptive(f, 0.0, mid, 1e-13) + quad::adaptive(f, mid, hi, 1e-13);
}

}  // namespace

TEST(Normal, ModeInOneDimension) { EXPECT_NEAR(make_normal(1, 1.0).generator(0.0), 1.0 / std::sqrt(2 * std::numbers::pi), 1e-15); }

TEST(Normal, ClosedFormInThreeDimensions) {
  EXPECT_NEAR(make_normal(3, 1.0).generator(1.0), std::pow(2 * std::numbers::pi, -1.5) * std::exp(-0.5), 1e-16);
}

TEST(Normal, NormalizesInTwoDimensions) {
  const auto m = make_normal(2, 1.0);
  const double total = quad::adaptive(
      [&](double r) { return special::sphere_area(2) * r * m.generator(r * r); }, 0.0, INFINITY, 1e-13);
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(UniformBall, DensityInsideAndOutside) {
  EXPECT_NEAR(make_uniform_ball(3, 1.0).generator(0.5), 3.0 / (4.0 * std::numbers::pi), 1e-15);
  EXPECT_EQ(make_uniform_ball(1, 1.0).generator(4.0), 0.0);
  EXPECT_NEAR(1.0 / make_uniform_ball(2, 2.0).generator(1.0), 4.0 * std::numbers::pi, 1e-13);
}

TEST(ScaleMixture, DegenerateMixingIsNormal) {
  const auto mix = make_scale_mixture_normal(4, PointMassMixing{{1.0}, {1.0}});
  const auto n = make_normal(4, 1.0);
  for (double t = 0.0; t < 30.0; t += 0.37) EXPECT_NEAR(mix.generator(t), n.generator(t), 1e-10);
}

TEST(ScaleMixture, CauchyAtOrigin) {
  EXPECT_NEAR(make_scale_mixture_normal(1, InverseGammaMixing{0.5, 0.5}).generator(0.0), 1.0 / std::numbers::pi, 1e-14);
}

TEST(ScaleMixture, InverseGammaMatchesStudentDensity) {
  // Student t with nu = 5 in d = 3.
  const double nu = 5.0;
  const auto m = make_scale_mixture_normal(3, InverseGammaMixing{nu / 2, nu / 2});
  for (double t : {0.0, 0.4, 2.0, 11.0}) {
    const double expected = std::exp(std::lgamma((nu + 3) / 2) - std::lgamma(nu / 2)) /
                            std::pow(nu * std::numbers::pi, 1.5) * std::pow(1.0 + t / nu, -(nu + 3) / 2);
    EXPECT_NEAR(m.generator(t), expected, 1e-14 * std::max(1.0, expected));
  }
}

TEST(NormPdf, UniformBallIsQuadratic) { EXPECT_NEAR(norm_pdf(make_uniform_ball(3, 1.0), 0.5), 0.75, 1e-14); }

TEST(NormPdf, ZeroAtOriginForTwoOrMoreDimensions) {
  for (const auto& m : builtin_models()) {
    if (m.dim() >= 2) EXPECT_EQ(m.norm_pdf(0.0), 0.0) << m.describe();
  }
}

TEST(NormPdf, EveryBuiltinModelIntegratesToOne) {
  for (const auto& m : builtin_models()) EXPECT_NEAR(norm_mass(m), 1.0, 1e-8) << m.describe();
}

TEST(NormPdf, CdfQuantileRoundTrip) {
  for (const auto& m : builtin_models()) {
    for (double u : {0.01, 0.3, 0.5, 0.9, 0.999}) {
      EXPECT_NEAR(m.norm_cdf(m.norm_quantile(u)), u, 1e-10) << m.describe();
    }
    EXPECT_NEAR(m.norm_cdf(m.norm_median()), 0.5, 1e-10);
  }
}

TEST(GeneralizedInverse, InvertsOwnValue) {
  const auto m = make_normal(1, 1.0);
  EXPECT_NEAR(generalized_inverse(m, m.generator(4.0)), 4.0, 1e-12);
}

TEST(GeneralizedInverse, ZeroAboveTheMode) {
  for (const auto& m : builtin_models()) {
    EXPECT_EQ(m.generalized_inverse(m.generator(0.0)), 0.0) << m.describe();
    EXPECT_EQ(m.generalized_inverse(2.0 * m.generator(0.0)), 0.0) << m.describe();
  }
}

TEST(GeneralizedInverse, NormalClosedForm) {
  const auto m = make_normal(2, 1.0);
  // generator(z) = exp(-z/2) / (2 pi)
  EXPECT_NEAR(m.generalized_inverse(0.01), -2.0 * std::log(0.01 * 2.0 * std::numbers::pi), 1e-10);
}

TEST(GeneralizedInverse, RoundTripForStrictlyDecreasingGenerators) {
  for (const auto& m : builtin_models()) {
    if (!m.strictly_decreasing()) continue;
    for (double z = 0.05; z < 40.0; z *= 1.7) {
      EXPECT_NEAR(m.generalized_inverse(m.generator(z)), z, 1e-9 * std::max(1.0, z)) << m.describe() << " z=" << z;
    }
  }
}

TEST(GeneralizedInverse, UniformPlateau) {
  const auto m = make_uniform_ball(3, 1.0);
  const double level = m.generator(0.0);
  EXPECT_EQ(m.generalized_inverse(level * 0.5), 1.0);
  EXPECT_EQ(m.upper_inverse_log(std::log(level)), 1.0);
  EXPECT_EQ(m.generalized_inverse_log(std::log(level)), 0.0);
}

TEST(Sampling, UniformIntervalMeanAbsolute) {
  const auto xs = sample_norm(make_uniform_ball(1, 1.0), 1000000, 7);
  double mean = 0.0;
  double sq = 0.0;
  for (double x : xs) {
    mean += x;
    sq += x * x;
  }
  mean /= xs.size();
  const double se = std::sqrt((sq / xs.size() - mean * mean) / xs.size());
  EXPECT_NEAR(mean, 0.5, 3 * se);
}

TEST(Sampling, ChiSquareMean) {
  const auto xs = sample_norm(make_normal(3, 1.0), 1000000, 11);
  double sum = 0.0;
  for (double x : xs) sum += x * x;
  EXPECT_NEAR(sum / xs.size(), 3.0, 3.0 * std::sqrt(6.0 / xs.size()));
}

TEST(Sampling, SameSeedSameSequence) {
  const auto m = make_scale_mixture_normal(3, InverseGammaMixing{0.5, 0.5});
  EXPECT_EQ(sample_norm(m, 10000, 99), sample_norm(m, 10000, 99));
  EXPECT_NE(sample_norm(m, 10000, 99), sample_norm(m, 10000, 100));
}

TEST(Sampling, KolmogorovSmirnovAgainstNormCdf) {
  const std::size_t n = 100000;
  for (const auto& m : builtin_models()) {
    auto xs = sample_norm(m, n, 2024);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = m.norm_cdf(xs[i]);
      ks = std::max({ks, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    EXPECT_LT(ks, 1.63 / std::sqrt(static_cast<double>(n))) << m.describe();
  }
}

TEST(Sampling, OffsetNormMatchesNormLaw) {
  const std::size_t n = 100000;
  for (const auto& m : builtin_models()) {
    std::vector<double> xs(n);
    auto rng = make_engine(5, 0);
    Point x(m.dim());
    for (auto& v : xs) {
      m.sample_offset(rng, x);
      v = norm2(x);
    }
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = m.norm_cdf(xs[i]);
      ks = std::max({ks, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    EXPECT_LT(ks, 1.63 / std::sqrt(static_cast<double>(n))) << m.describe();
  }
}

TEST(MarginalCdf, MatchesNormalAndBall) {
  const auto n = make_normal(4, 2.0);
  EXPECT_NEAR(n.marginal_cdf(1.0), special::std_normal_cdf(1.0 / std::sqrt(2.0)), 1e-14);
  const auto b = make_uniform_ball(3, 2.0);
  EXPECT_NEAR(b.marginal_cdf(1.0), special::ball_marginal_cdf(3, 0.5), 1e-14);
}

TEST(Predictive, PlugInAtItsMode) {
  const Point c{0.0};
  EXPECT_NEAR(predictive_eval(make_normal(1, 1.0), 1.0, c, c), 1.0 / std::sqrt(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(predictive_eval(make_uniform_ball(1, 1.0), 2.0, c, c), 0.25, 1e-15);
}

TEST(Predictive, IntegratesToOne) {
  const auto q = make_normal(3, 1.0);
  const double c = 1.175;
  const Point center{0.0, 0.0, 0.0};
  const double total = quad::adaptive(
      [&](double r) {
        const Point y{r, 0.0, 0.0};
        return special::sphere_area(3) * r * r * predictive_eval(q, c, center, y);
      },
      0.0, INFINITY, 1e-13);
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Predictive, ChangeOfVariables) {
  const auto q = make_scale_mixture_normal(3, PointMassMixing{{1.0, 4.0}, {0.5, 0.5}});
  const PredictiveSpec spec{CenterEstimator::raw(), 1.6, q};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    const Point center{g(rng), g(rng), g(rng)};
    const Point y{g(rng) * 2, g(rng) * 2, g(rng) * 2};
    Point u(3);
    for (int k = 0; k < 3; ++k) u[k] = (y[k] - center[k]) / spec.scale_c;
    const double expected = std::pow(spec.scale_c, -3) * predictive_eval(q, 1.0, Point(3, 0.0), u);
    EXPECT_NEAR(predictive_eval(spec, center, y), expected, 1e-14);
  }
}

TEST(Estimator, MleBallProjection) {
  EXPECT_EQ(mle_ball_estimator(Point{0.5, 0.0, 0.0}, 1.0), (Point{0.5, 0.0, 0.0}));
  const auto p = mle_ball_estimator(Point{3.0, 4.0, 0.0}, 1.0);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
  EXPECT_EQ(p[2], 0.0);
  EXPECT_EQ(mle_ball_estimator(Point{0.0, 0.0}, 1.0), (Point{0.0, 0.0}));
}

TEST(Estimator, MleBallIsCloserToEveryParameterInTheBall) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    Point theta{g(rng), g(rng), g(rng)};
    const double scale = u(rng) / norm2(theta);
    for (double& v : theta) v *= scale;
    const Point x{theta[0] + 2 * g(rng), theta[1] + 2 * g(rng), theta[2] + 2 * g(rng)};
    EXPECT_LE(distance(mle_ball_estimator(x, 1.0), theta), distance(x, theta) + 1e-14);
  }
}

TEST(Estimator, Describe) {
  EXPECT_EQ(CenterEstimator::raw().describe(), "raw");
  EXPECT_EQ(CenterEstimator::mle_ball(1.0).describe(), "mle-ball(m=1)");
  EXPECT_THROW(CenterEstimator::mle_ball(0.0), ConfigError);
}

TEST(LossTransform, PowerAndDerivative) {
  const auto g = LossTransform::power(2);
  EXPECT_DOUBLE_EQ(g(0.7), 0.49);
  EXPECT_DOUBLE_EQ(g.derivative(0.7), 1.4);
  EXPECT_EQ(parse_loss_transform("power:2").describe(), g.describe());
  EXPECT_EQ(parse_loss_transform("identity")(0.3), 0.3);
  EXPECT_THROW(parse_loss_transform("power:x"), ConfigError);
  EXPECT_THROW(parse_loss_transform("cubic"), ConfigError);
}

TEST(Parse, RoundTrip) {
  for (const std::string spec : {"normal:d=3,var=1", "uniball:d=3,m=1", "mixnormal:d=2,mix=invgamma(0.5,0.5)",
                                 "mixnormal:d=2,mix=discrete(1:0.5,4:0.5)"}) {
    const auto m = parse_model(spec);
    const auto again = parse_model(m.describe());
    EXPECT_EQ(again.describe(), m.describe());
    for (double t : {0.0, 0.5, 3.0}) EXPECT_DOUBLE_EQ(again.generator(t), m.generator(t));
  }
}

TEST(Parse, ErrorsNameTheToken) {
  try {
    parse_model("normal:d=3,var=abc");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
  }
  EXPECT_THROW(parse_model("gauss:d=3"), ConfigError);
  EXPECT_THROW(parse_model("normal:var=1"), ConfigError);
  EXPECT_THROW(parse_model("normal:d=0,var=1"), ConfigError);
  EXPECT_THROW(parse_model("normal:d=2,var=-1"), ConfigError);
}

TEST(Search, GridAndGoldenSection) {
  const auto g = make_grid(1.0, 1.4, 0.005);
  EXPECT_EQ(g.size(), 81u);
  EXPECT_NEAR(g.back(), 1.4, 1e-12);
  EXPECT_THROW(make_grid(2.0, 1.0, 0.1), ConfigError);
  const auto [x, fx] = golden_section([](double c) { return (c - 1.3) * (c - 1.3); }, 1.0, 2.0, 1e-8);
  EXPECT_NEAR(x, 1.3, 1e-6);
  EXPECT_NEAR(fx, 0.0, 1e-10);
}

TEST(Search, BoundaryFlag) {
  const auto grid = make_grid(1.0, 2.0, 0.1);
  std::vector<double> values;
  for (double c : grid) values.push_back(-c);
  const auto res = refine_grid_minimum([](double c) { return -c; }, grid, values, 1e-6);
  EXPECT_TRUE(res.boundary);
  EXPECT_NEAR(res.c_star, 2.0, 1e-12);
}

TEST(Parallel, ChunkedSamplingIndependentOfWorkerCount) {
  const auto m = make_normal(2, 1.0);
  std::vector<double> one(3 * kChunkSize);
  std::vector<double> four(3 * kChunkSize);
  auto fill = [&](std::vector<double>& out, unsigned workers) {
    parallel_for(
        3, [&](std::size_t c) {
          auto rng = make_engine(42, c);
          for (std::size_t i = 0; i < kChunkSize; ++i) out[c * kChunkSize + i] = m.sample_norm(rng);
        },
        workers);
  };
  fill(one, 1);
  fill(four, 4);
  EXPECT_EQ(one, four);
}
