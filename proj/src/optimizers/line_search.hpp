#pragma once

#include <vector>

#include "evaluator.hpp"

namespace qaoa::opt::detail {

struct LinePoint {
  double alpha = 0.0;
  double f = 0.0;
  std::vector<double> x;
  std::vector<double> g;  // empty when the search does not evaluate gradients
};

/// Minimizes phi(t) = f(x + t d) by bracketing and Brent's parabolic/golden search.
/// Returns the best point found (alpha = 0 if nothing improved on f0).
LinePoint brent_line_min(Evaluator& ev, const std::vector<double>& x, double f0, const std::vector<double>& d,
                         double initial_step, double tol);

/// Backtracking with the Armijo condition f(x + a d) <= f0 + c1 a slope. `ok` false when the
/// step collapsed without sufficient decrease.
bool backtracking(Evaluator& ev, const std::vector<double>& x, double f0, double slope, const std::vector<double>& d,
                  double alpha0, double c1, LinePoint& out);

/// Strong Wolfe search (bracketing + zoom with safeguarded quadratic interpolation). The
/// gradient is only evaluated at trials that pass sufficient decrease. `ok` false when no Wolfe point was found; `out` then
/// holds the best decreasing trial, if any (alpha = 0 otherwise).
bool wolfe_search(Evaluator& ev, const std::vector<double>& x, double f0, const std::vector<double>& g0,
                  const std::vector<double>& d, double alpha0, double c1, double c2, LinePoint& out);

}  // namespace qaoa::opt::detail
