#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rwlab {

/// Least-squares line through (log x, log y).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t point_count = 0;
};

/// Needs at least three points, all coordinates strictly positive.
FitResult fit_exponent(std::span<const double> x, std::span<const double> y);

/// Indices i with y[i-1] < y[i] >= y[i+1]. Endpoints are never reported.
std::vector<std::size_t> local_maxima(std::span<const double> y);

}  // namespace rwlab
