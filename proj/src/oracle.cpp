#include "l1pred/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "l1pred/errors.hpp"
#include "l1pred/quadrature.hpp"
#include "l1pred/rng.hpp"

namespace l1pred::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(const RadialModel& q, std::span<const double> theta, std::span<const double> center, double c) {
  if (static_cast<int>(theta.size()) != q.dim() || static_cast<int>(center.size()) != q.dim()) {
    throw ConfigError("points must have the model dimension");
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale factor c must be positive and finite");
}

bool identical(std::span<const double> theta, std::span<const double> center, double c) {
  return c == 1.0 && std::equal(theta.begin(), theta.end(), center.begin());
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// log of the true density and of the scaled plug-in at y.
struct LogPair {
  double truth;
  double plugin;
};

LogPair log_densities(const RadialModel& q, std::span<const double> theta, std::span<const double> center, double c,
                      double log_cd, std::span<const double> y) {
  return {q.log_generator(sq_dist(y, theta)), q.log_generator(sq_dist(y, center) / (c * c)) - log_cd};
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Chunked sampling with per-chunk engines; chunk sums are combined in chunk
// order so the result does not depend on the worker count.
template <class Draw>
std::pair<double, double> chunked_mean_var(std::size_t n, std::uint64_t seed, Draw draw, unsigned workers) {
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Moments> parts(chunks);
  parallel_for(
      chunks,
      [&](std::size_t k) {
        auto rng = make_engine(seed, k);
        const std::size_t end = std::min(n, (k + 1) * kChunkSize);
        Moments m;
        for (std::size_t i = k * kChunkSize; i < end; ++i) {
          const double v = draw(rng);
          m.sum += v;
          m.sum_sq += v * v;
        }
        parts[k] = m;
      },
      workers == 0 ? default_workers() : workers);
  Moments total;
  for (const auto& m : parts) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double nn = static_cast<double>(n);
  const double mean = total.sum / nn;
  const double var = n > 1 ? std::max(0.0, (total.sum_sq - nn * mean * mean) / (nn - 1.0)) : 0.0;
  return {mean, var};
}

LossEstimate mixture_estimate(const RadialModel& q, std::span<const double> theta, std::span<const double> center,
                              double c, std::size_t n, std::uint64_t seed, unsigned workers) {
  const int d = q.dim();
  const double log_cd = d * std::log(c);
  auto draw = [&](std::mt19937_64& rng) {
    thread_local std::vector<double> y;
    y.resize(d);
    std::bernoulli_distribution coin(0.5);
    const bool from_truth = coin(rng);
    q.sample_offset(rng, y);
    for (int j = 0; j < d; ++j) y[j] = from_truth ? theta[j] + y[j] : center[j] + c * y[j];
    const auto lp = log_densities(q, theta, center, c, log_cd, y);
    if (std::isinf(lp.truth) || std::isinf(lp.plugin)) return 2.0;
    // 2 |f1 - f2| / (f1 + f2) = 2 |tanh((log f1 - log f2) / 2)|
    return 2.0 * std::abs(std::tanh(0.5 * (lp.truth - lp.plugin)));
  };
  const auto [mean, var] = chunked_mean_var(n, seed, draw, workers);
  return {std::clamp(mean, 0.0, 2.0), std::sqrt(var / static_cast<double>(n)), n, Method::importance_mixture};
}

}  // namespace

LossEstimate mc_l1_loss(const RadialModel& q, std::span<const double> theta, std::span<const double> center, double c,
                        std::size_t n, std::uint64_t seed) {
  check_inputs(q, theta, center, c);
  if (n < 1000) throw ConfigError("oracle loss estimates need n >= 1000");
  if (identical(theta, center, c)) return {0.0, 0.0, 0, Method::exact};
  return mixture_estimate(q, theta, center, c, n, seed, 0);
}

LossEstimate overlap_route_loss(const RadialModel& q, std::span<const double> theta, std::span<const double> center,
                                double c, std::size_t n, std::uint64_t seed) {
  check_inputs(q, theta, center, c);
  if (n < 1) throw ConfigError("sample size must be positive");
  if (identical(theta, center, c)) return {0.0, 0.0, 0, Method::exact};
  const int d = q.dim();
  const double log_cd = d * std::log(c);
  auto draw = [&](std::mt19937_64& rng) {
    thread_local std::vector<double> y;
    y.resize(d);
    q.sample_offset(rng, y);
    for (int j = 0; j < d; ++j) y[j] += theta[j];
    const auto lp = log_densities(q, theta, center, c, log_cd, y);
    if (std::isinf(lp.plugin)) return 0.0;
    return std::min(1.0, std::exp(lp.plugin - lp.truth));
  };
  const auto [mean, var] = chunked_mean_var(n, seed, draw, 0);
  return {std::clamp(2.0 - 2.0 * mean, 0.0, 2.0), 2.0 * std::sqrt(var / static_cast<double>(n)), n, Method::overlap};
}

LossEstimate mc_risk(const RadialModel& p, const RadialModel& q, const CenterEstimator& estimator, double c,
                     std::span<const double> theta, const LossTransform& gamma, std::size_t n_x, std::size_t n_y,
                     std::uint64_t seed, unsigned workers) {
  if (p.dim() != q.dim()) throw ConfigError("models for X and Y must share the dimension");
  if (n_x < 1000 || n_y < 1000) throw ConfigError("oracle risk estimates need n_x, n_y >= 1000");
  const int d = p.dim();
  check_inputs(q, theta, theta, c);
  std::vector<double> values(n_x);
  std::vector<double> inner_var(n_x);
  const std::size_t chunks = (n_x + kChunkSize - 1) / kChunkSize;
  parallel_for(
      chunks,
      [&](std::size_t k) {
        auto rng = make_engine(seed, k);
        std::vector<double> x(d);
        std::vector<double> center(d);
        const std::size_t end = std::min(n_x, (k + 1) * kChunkSize);
        for (std::size_t i = k * kChunkSize; i < end; ++i) {
          p.sample_offset(rng, x);
          for (int j = 0; j < d; ++j) x[j] += theta[j];
          estimator.apply(x, center);
          LossEstimate loss{0.0, 0.0, 0, Method::exact};
          if (!identical(theta, center, c)) {
            loss = mixture_estimate(q, theta, center, c, n_y, derive_seed(seed, 1'000'000'007ULL + i), 1);
          }
          values[i] = gamma(loss.value);
          const double slope = gamma.derivative(loss.value);
          inner_var[i] = std::isfinite(slope) ? slope * slope * loss.std_err * loss.std_err : 0.0;
        }
      },
      workers == 0 ? default_workers() : workers);
  double mean = 0.0;
  for (double v : values) mean += v;
  const double nn = static_cast<double>(n_x);
  mean /= nn;
  double between = 0.0;
  double within = 0.0;
  for (std::size_t i = 0; i < n_x; ++i) {
    between += (values[i] - mean) * (values[i] - mean);
    within += inner_var[i];
  }
  between /= (nn - 1.0);
  within /= nn;
  return {mean, std::sqrt((between + within) / nn), n_x * n_y, Method::importance_mixture};
}

double grid_l1_loss(const RadialModel& q, std::span<const double> theta, std::span<const double> center, double c,
                    const GridSpec& grid) {
  check_inputs(q, theta, center, c);
  const int d = q.dim();
  if (d > 2) throw DomainError("grid oracle is limited to d <= 2");
  if (identical(theta, center, c)) return 0.0;
  const double log_cd = d * std::log(c);
  const double support = q.support_radius();
  const double reach = std::isfinite(support) ? support : q.truncation_radius(grid.tail_mass);
  auto density_gap = [&](std::span<const double> y) {
    const auto lp = log_densities(q, theta, center, c, log_cd, y);
    return std::abs(std::exp(lp.truth) - std::exp(lp.plugin));
  };
  // Break points along one axis: the centers and, for bounded q, the
  // support edges of both densities on the current line.
  auto axis_breaks = [&](double a, double b, double half_a, double half_b) {
    std::vector<double> br{a, b};
    if (half_a >= 0.0) {
      br.push_back(a - half_a);
      br.push_back(a + half_a);
    }
    if (half_b >= 0.0) {
      br.push_back(b - half_b);
      br.push_back(b + half_b);
    }
    return br;
  };
  const double lo0 = std::min(theta[0] - reach, center[0] - c * reach);
  const double hi0 = std::max(theta[0] + reach, center[0] + c * reach);
  const bool bounded = std::isfinite(support);

  if (d == 1) {
    auto br = axis_breaks(theta[0], center[0], bounded ? support : -1.0, bounded ? c * support : -1.0);
    br.push_back(lo0);
    br.push_back(hi0);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    double y[1];
    return quad::adaptive_pieces(
        [&](double t) {
          y[0] = t;
          return density_gap(y);
        },
        br, grid.rel_tol);
  }

  auto chord = [](double radius, double offset) {
    const double s = radius * radius - offset * offset;
    return s >= 0.0 ? std::sqrt(s) : -1.0;
  };
  auto inner = [&](double y1) {
    const double half_a = bounded ? chord(support, y1 - theta[0]) : -1.0;
    const double half_b = bounded ? chord(c * support, y1 - center[0]) : -1.0;
    const double lo1 = std::min(theta[1] - reach, center[1] - c * reach);
    const double hi1 = std::max(theta[1] + reach, center[1] + c * reach);
    auto br = axis_breaks(theta[1], center[1], half_a, half_b);
    br.push_back(lo1);
    br.push_back(hi1);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    br.erase(std::remove_if(br.begin(), br.end(), [&](double v) { return v < lo1 || v > hi1; }), br.end());
    double y[2] = {y1, 0.0};
    return quad::adaptive_pieces(
        [&](double t) {
          y[1] = t;
          return density_gap(y);
        },
        br, grid.rel_tol);
  };
  auto br = axis_breaks(theta[0], center[0], bounded ? support : -1.0, bounded ? c * support : -1.0);
  br.push_back(lo0);
  br.push_back(hi0);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return std::clamp(quad::adaptive_pieces(inner, br, grid.rel_tol), 0.0, 2.0);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::importance_mixture:
      return "importance-mixture";
    case Method::overlap:
      return "overlap";
    case Method::radial_grid:
      return "radial-grid";
    case Method::exact:
      return "exact";
  }
  return "exact";
}

}  // namespace l1pred::oracle
