#pragma once

#include <functional>
#include <vector>

namespace gnlab {

struct NelderMeadOptions {
  int max_evaluations = 400;
  double tolerance = 1e-10;     // spread of simplex values
  double initial_step = 0.25;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> best_trace;  // best value after each evaluation (non-increasing)
};

/// Minimizes f from x0 with the standard coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace gnlab
