#pragma once

#include <functional>
#include <vector>

namespace sketchpost {

struct BrentResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Classic derivative-free 1-D minimization (golden section with parabolic
// steps) on [a, b].
BrentResult brent_minimize(const std::function<double(double)>& f, double a,
                           double b, double x_tol = 1e-9, int max_iter = 200);

struct SimplexResult {
  std::vector<double> x;
  double fx = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Small Nelder-Mead simplex minimizer; step sets the initial simplex size
// per coordinate.
SimplexResult simplex_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step = 0.25, double f_tol = 1e-10,
    int max_iter = 500);

}  // namespace sketchpost
