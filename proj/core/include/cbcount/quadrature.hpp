#pragma once

#include <functional>

namespace cbcount {

struct QuadratureResult {
  double value = 0;
  double error = 0;  // estimated absolute error
  long evaluations = 0;
};

/// Adaptive Simpson with Richardson extrapolation on [a, b], starting from
/// `panels` uniform panels. Stops when the estimated absolute error is below
/// rel_tol * |integral|. Throws ToleranceError carrying the best estimate when
/// the evaluation budget or depth limit is exhausted first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                           int panels = 64, long max_evaluations = 4'000'000);

}  // namespace cbcount
