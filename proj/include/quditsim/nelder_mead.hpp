#pragma once

#include <functional>
#include <vector>

namespace quditsim {

struct NelderMeadOptions {
  double initial_step = 0.3;
  /// Stop when both the spread of simplex values and the simplex diameter
  /// fall below these.
  double f_tolerance = 1e-10;
  double x_tolerance = 1e-7;
  int max_evaluations = 4000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  /// Best value after each iteration; non-increasing.
  std::vector<double> trace;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Downhill simplex with reflection 1, expansion 2, contraction 1/2 and
/// shrink 1/2. The initial simplex is x0 plus initial_step along each axis.
NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace quditsim
