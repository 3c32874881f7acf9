#include "l1pred/search.hpp"

#include <cmath>

#include "l1pred/errors.hpp"

namespace l1pred {

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid step must be positive");
  if (!(hi >= lo)) throw ConfigError("grid upper end must not be below the lower end");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

std::size_t argmin(const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("cannot minimize over an empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

std::pair<double, double> golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

SearchResult refine_grid_minimum(const std::function<double(double)>& f, const std::vector<double>& grid,
                                 const std::vector<double>& values, double tol) {
  const std::size_t i = argmin(values);
  SearchResult out{grid[i], values[i], i + 1 == grid.size() && grid.size() > 1};
  if (grid.size() < 2 || out.boundary) return out;
  const double lo = grid[i == 0 ? 0 : i - 1];
  const double hi = grid[i + 1];
  const auto [c, v] = golden_section(f, lo, hi, tol);
  if (v < out.risk) {
    out.c_star = c;
    out.risk = v;
  }
  return out;
}

}  // namespace l1pred
