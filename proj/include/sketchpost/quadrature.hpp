#pragma once

#include <functional>

namespace sketchpost {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // error estimate actually achieved
  int evaluations = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (G7, K15) on a finite interval.  Splits the worst
// subinterval until the summed error estimate meets
// max(abs_tol, rel_tol * |integral|) or the interval budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol = 1e-10,
                                    double rel_tol = 1e-9,
                                    int max_intervals = 4000);

// Same, but throws AccuracyError (carrying the achieved error) if the
// tolerance was not reached.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10,
                          double rel_tol = 1e-9, int max_intervals = 4000);

// Integral over (0, inf) via the rational substitution u = t / (1 - t).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double abs_tol = 1e-10,
                                         double rel_tol = 1e-9,
                                         int max_intervals = 4000);

struct LogIntegralResult {
  double log_value = 0.0;  // -inf if the integral is zero
  double rel_error = 0.0;
  bool converged = false;
};

// log of integral over (0, inf) of exp(log_f(u)) du for integrands whose
// linear value would over/underflow.  log_f may return -inf.  The integrand
// is max-shifted (coarse scan in the transformed variable) before an
// adaptive pass, so only relative accuracy is meaningful.
LogIntegralResult log_integrate_semi_infinite(
    const std::function<double(double)>& log_f, double rel_tol = 1e-9,
    int max_intervals = 4000);

}  // namespace sketchpost
