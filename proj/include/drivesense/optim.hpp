#pragma once

#include <functional>
#include <vector>

namespace drivesense {

struct NelderMeadOptions {
  int max_iterations = 2000;
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-10;
  double initial_step_fraction = 0.1;  // of the box width, per coordinate
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex descent constrained to a box: candidate points are
/// projected onto [lower, upper] before evaluation. Deterministic for a given
/// start point.
NelderMeadResult nelder_mead_bounded(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& start, const std::vector<double>& lower,
    const std::vector<double>& upper, const NelderMeadOptions& opts = {});

}  // namespace drivesense
