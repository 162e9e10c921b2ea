#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hamest {

struct NelderMeadOptions {
  int max_iterations = 2000;
  double initial_step = 0.2;
  double f_tolerance = 1e-13;  // relative spread of simplex values
  double x_tolerance = 1e-10;  // simplex diameter
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization (reflection 1, expansion 2,
/// contraction ½, shrink ½).  The best vertex never gets worse than f(x0).
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace hamest
