#pragma once

#include <functional>
#include <vector>

namespace l1pred {

struct SearchSpec {
  double c_min = 1.0;
  double c_max = 4.0;
  double step = 0.01;
  double tolerance = 1e-4;
};

struct SearchResult {
  double c_star = 1.0;
  double risk = 0.0;
  bool boundary = false;  // grid minimum sat at c_max
};

/// c_min, c_min + step, ..., up to c_max (inclusive within 1e-9 step).
std::vector<double> make_grid(double lo, double hi, double step);

/// Index of the smallest value; ties go to the first.
std::size_t argmin(const std::vector<double>& values);

/// Golden-section minimization on [lo, hi] until the bracket is below tol.
/// Returns (argmin, value).
std::pair<double, double> golden_section(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Grid scan with precomputed values, then golden-section refinement on
/// the bracket around the grid minimum.
SearchResult refine_grid_minimum(const std::function<double(double)>& f, const std::vector<double>& grid,
                                 const std::vector<double>& values, double tol);

}  // namespace l1pred
