#pragma once

#include <span>

namespace mcamsim {

double mean(std::span<const double> v);

/// Population standard deviation.
double stddev(std::span<const double> v);

/// Coefficient of determination of the least-squares line through (x, y).
/// Needs at least 3 points and non-degenerate x.
double linear_r2(std::span<const double> x, std::span<const double> y);

}  // namespace mcamsim
