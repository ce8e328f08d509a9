#include "sketchpost/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sketchpost/errors.hpp"
#include "sketchpost/logspace.hpp"

namespace sketchpost {
namespace {

// Gauss-Kronrod (G7, K15) nodes and weights on [-1, 1], positive half.
// Even-indexed Kronrod nodes interleave; odd-indexed ones are the Gauss-7
// nodes.
constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWeightsG[4] = {0.129484966168870, 0.279705391489277,
                                 0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b;
  double value;  // K15 estimate
  double err;    // |K15 - G7|
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fc = f(c);
  double k15 = kWeightsK[7] * fc;
  double g7 = kWeightsG[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double x = h * kNodes[i];
    double fs = f(c - x) + f(c + x);
    k15 += kWeightsK[i] * fs;
    if (i % 2 == 1) g7 += kWeightsG[i / 2] * fs;
  }
  k15 *= h;
  g7 *= h;
  return Panel{a, b, k15, std::abs(k15 - g7)};
}

QuadratureResult adaptive_core(const std::function<double(double)>& f,
                               const std::vector<double>& breakpoints,
                               double abs_tol, double rel_tol,
                               int max_intervals) {
  std::vector<Panel> heap;
  int evals = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    heap.push_back(evaluate_panel(f, breakpoints[i], breakpoints[i + 1]));
    evals += 15;
    std::push_heap(heap.begin(), heap.end());
  }
  auto totals = [&heap]() {
    double v = 0.0, e = 0.0;
    for (const Panel& p : heap) {
      v += p.value;
      e += p.err;
    }
    return std::pair<double, double>(v, e);
  };
  while (int(heap.size()) < max_intervals) {
    auto [value, err] = totals();
    if (!std::isfinite(value)) break;
    if (err <= std::max(abs_tol, rel_tol * std::abs(value))) {
      return QuadratureResult{value, err, evals, true};
    }
    std::pop_heap(heap.begin(), heap.end());
    Panel worst = heap.back();
    heap.pop_back();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at floating point resolution; keep its estimate and accept.
      heap.push_back(Panel{worst.a, worst.b, worst.value, 0.0});
      std::push_heap(heap.begin(), heap.end());
      continue;
    }
    heap.push_back(evaluate_panel(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(evaluate_panel(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end());
    evals += 30;
  }
  auto [value, err] = totals();
  bool ok = std::isfinite(value) &&
            err <= std::max(abs_tol, rel_tol * std::abs(value));
  return QuadratureResult{value, err, evals, ok};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    double rel_tol, int max_intervals) {
  if (!(a < b)) throw DomainError("integration bounds must satisfy a < b");
  return adaptive_core(f, {a, b}, abs_tol, rel_tol, max_intervals);
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          int max_intervals) {
  QuadratureResult r = integrate_adaptive(f, a, b, abs_tol, rel_tol,
                                          max_intervals);
  if (!r.converged) {
    throw AccuracyError("quadrature did not reach the requested tolerance",
                        r.abs_error);
  }
  return r.value;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double abs_tol, double rel_tol,
                                         int max_intervals) {
  auto g = [&f](double t) {
    double om = 1.0 - t;
    double u = t / om;
    return f(u) / (om * om);
  };
  // Seed with a few panels so mass far from the origin is not missed.
  return adaptive_core(g, {0.0, 0.125, 0.25, 0.5, 0.75, 0.875, 1.0}, abs_tol,
                       rel_tol, max_intervals);
}

LogIntegralResult log_integrate_semi_infinite(
    const std::function<double(double)>& log_f, double rel_tol,
    int max_intervals) {
  // Work in t = u / (1 + u); log-jacobian is -2 log(1 - t).
  auto log_g = [&log_f](double t) {
    double om = 1.0 - t;
    if (om <= 0.0) return kNegInf;
    return log_f(t / om) - 2.0 * std::log(om);
  };
  // Coarse scan for the max shift.
  const int kScan = 512;
  double shift = kNegInf;
  for (int i = 0; i < kScan; ++i) {
    double t = (i + 0.5) / kScan;
    shift = std::max(shift, log_g(t));
  }
  if (shift == kNegInf) return LogIntegralResult{kNegInf, 0.0, true};
  auto h = [&log_g, shift](double t) {
    double lg = log_g(t);
    return lg == kNegInf ? 0.0 : std::exp(lg - shift);
  };
  std::vector<double> pts;
  for (int i = 0; i <= 16; ++i) pts.push_back(i / 16.0);
  QuadratureResult r = adaptive_core(h, pts, 0.0, rel_tol, max_intervals);
  if (r.value <= 0.0) {
    return LogIntegralResult{kNegInf, r.abs_error, r.converged};
  }
  return LogIntegralResult{shift + std::log(r.value),
                           r.abs_error / r.value, r.converged};
}

}  // namespace sketchpost
