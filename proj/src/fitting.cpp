#include "sketchpost/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sketchpost/errors.hpp"
#include "sketchpost/optimize.hpp"
#include "sketchpost/species.hpp"

namespace sketchpost {

namespace {

constexpr double kLogThetaLo = -6.907755278982137;  // log(1e-3)
constexpr double kLogThetaHi = 18.420680743952367;  // log(1e8)

}  // namespace

FitReport fit_dp_theta(const Sketch& sk) {
  if (sk.width_J < 1 || sk.counts.empty()) {
    throw DomainError("sketch must have at least one bucket");
  }
  if (sk.total_n < 1) {
    throw DomainError("cannot fit concentration from an empty sketch");
  }

  FitReport report;
  auto objective = [&](double log_theta) {
    const double theta = std::exp(log_theta);
    const double ll = dp_sketch_log_marginal(sk, theta);
    report.objective_trace.push_back({{theta}, ll});
    return -ll;
  };

  BrentResult res = brent_minimize(objective, kLogThetaLo, kLogThetaHi, 1e-10, 300);
  // Weakly informative sketches make the marginal monotone, so it flattens
  // toward an endpoint and Brent can stall anywhere on the plateau.  If an
  // endpoint matches the interior "optimum" to within likelihood noise, the
  // honest answer is the boundary, flagged as such.
  double best_x = res.x;
  double best_f = res.fx;
  bool at_boundary = false;
  const double slack = 1e-9 * std::max(1.0, std::abs(best_f));
  for (double edge : {kLogThetaHi, kLogThetaLo}) {
    const double f_edge = objective(edge);
    if (f_edge <= best_f + slack) {
      best_x = edge;
      best_f = std::min(best_f, f_edge);
      at_boundary = true;
      break;
    }
  }
  report.params_hat["theta"] = std::exp(best_x);
  report.converged = res.converged;
  report.boundary_hit = at_boundary || best_x < kLogThetaLo + 1e-6 ||
                        best_x > kLogThetaHi - 1e-6;
  return report;
}

// Two-parameter likelihood-free fit: the candidate (alpha, gamma) is scored
// by how well the asymptotic shrinkage estimator recovers the prefix's true
// per-token frequencies from the prefix's own sketch, using mean absolute
// error over distinct tokens.  A coarse grid seeds a simplex refinement in
// (logit alpha, log gamma) space, where both parameters stay in range by
// construction.
FitReport fit_pyp_prefix(const std::vector<std::string>& tokens_prefix,
                         const HashFunction& h) {
  if (std::int64_t(tokens_prefix.size()) < 100) {
    throw DomainError("prefix fit needs at least 100 tokens");
  }

  std::unordered_map<std::string, std::int64_t> freq;
  for (const std::string& tok : tokens_prefix) freq[tok] += 1;
  if (freq.size() < 2) {
    throw DomainError("prefix fit needs at least 2 distinct tokens");
  }

  const std::int64_t J = h.width_J;
  std::vector<std::int64_t> counts(std::size_t(J), 0);
  for (const std::string& tok : tokens_prefix) {
    counts[std::size_t(hash_key(h, tok))] += 1;
  }

  // (true frequency, observed bucket count) per distinct token.
  std::vector<std::pair<std::int64_t, std::int64_t>> cells;
  cells.reserve(freq.size());
  for (const auto& [tok, f] : freq) {
    cells.push_back({f, counts[std::size_t(hash_key(h, tok))]});
  }

  auto mae_of = [&](double logit_alpha, double log_gamma) {
    PypParams params;
    params.alpha = 1.0 / (1.0 + std::exp(-logit_alpha));
    params.gamma = std::exp(log_gamma);
    double abs_err = 0.0;
    for (const auto& [f, c] : cells) {
      abs_err += std::abs(double(f) - pyp_mean_asymptotic(c, params, J));
    }
    return abs_err / double(cells.size());
  };

  double best_la = 0.0;
  double best_lg = 0.0;
  double best_mae = std::numeric_limits<double>::infinity();
  for (int ia = 1; ia <= 19; ++ia) {
    const double alpha = 0.05 * double(ia);
    const double la = std::log(alpha / (1.0 - alpha));
    for (int ig = 0; ig < 17; ++ig) {
      const double lg = -2.0 + 8.0 * double(ig) / 16.0;
      const double mae = mae_of(la, lg);
      if (mae < best_mae) {
        best_mae = mae;
        best_la = la;
        best_lg = lg;
      }
    }
  }

  FitReport report;
  SimplexResult res = simplex_minimize(
      [&](const std::vector<double>& x) {
        const double mae = mae_of(x[0], x[1]);
        PypParams params;
        params.alpha = 1.0 / (1.0 + std::exp(-x[0]));
        params.gamma = std::exp(x[1]);
        report.objective_trace.push_back({{params.alpha, params.gamma}, mae});
        return mae;
      },
      {best_la, best_lg}, 0.25, 1e-10, 400);

  const double alpha_hat = 1.0 / (1.0 + std::exp(-res.x[0]));
  const double gamma_hat = std::exp(res.x[1]);
  report.params_hat["alpha"] = alpha_hat;
  report.params_hat["gamma"] = gamma_hat;
  report.converged = res.converged;
  report.boundary_hit = res.x[0] < -4.6 || res.x[0] > 4.6 || res.x[1] < -3.0 ||
                        res.x[1] > 7.0;
  report.n_prefix = std::int64_t(tokens_prefix.size());
  return report;
}

}  // namespace sketchpost
