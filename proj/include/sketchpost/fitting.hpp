#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sketchpost/hashing.hpp"
#include "sketchpost/species.hpp"

namespace sketchpost {

struct FitTracePoint {
  std::vector<double> params;
  double objective;
};

struct FitReport {
  std::map<std::string, double> params_hat;
  std::vector<FitTracePoint> objective_trace;
  bool converged = false;
  bool boundary_hit = false;
  std::int64_t n_prefix = 0;
};

// Maximum marginal likelihood for the Dirichlet concentration given bucketed
// counts; one-dimensional search over log theta in [log 1e-3, log 1e8].
// A degenerate sketch (all mass in one bucket, or all singletons) pushes the
// optimum to a boundary; boundary_hit is set and the boundary value returned.
FitReport fit_dp_theta(const Sketch& sk);

// Two-parameter fit from a raw token prefix: picks (alpha, gamma) minimizing
// the mean absolute error of the asymptotic estimator against the prefix's
// true frequencies, by coarse grid search plus simplex refinement.
// Requires at least 100 tokens and at least 2 distinct tokens.
FitReport fit_pyp_prefix(const std::vector<std::string>& tokens_prefix,
                         const HashFunction& h);

}  // namespace sketchpost
