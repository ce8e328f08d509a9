#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sketchpost/hashing.hpp"
#include "sketchpost/specialfns.hpp"

namespace sketchpost {

struct DpParams {
  double theta = 1.0;  // > 0
  void validate() const;
};

struct PypParams {
  double alpha = 0.5;  // in (0, 1)
  double gamma = 1.0;  // > 0
  void validate() const;
};

// Tilts for the generic single-bucket posterior: the integrand carries
// u^{n + gamma_tilt} and every kernel argument is shifted by beta_tilt.
struct PkTilt {
  double gamma_tilt = 0.0;  // >= 0
  double beta_tilt = 0.0;   // >= 0
  void validate() const;
};

// Distribution of the frequency of one more observation, l = 0..support_max.
struct PosteriorPmf {
  std::vector<double> log_probs;
  // Per-entry standard errors on the linear-scale probabilities; present for
  // Monte Carlo methods only.
  std::optional<std::vector<double>> stderrs;
  std::string method_tag;

  std::int64_t support_max() const {
    return std::int64_t(log_probs.size()) - 1;
  }
  double prob(std::int64_t l) const;
};

struct PmfSummary {
  double mean = 0.0;
  std::int64_t median = 0;    // smallest l with cdf >= 1/2
  std::int64_t mode = 0;      // smallest maximizer
  std::int64_t ci_lower = 0;  // shortest consecutive interval with >= level
  std::int64_t ci_upper = 0;  // mass; leftmost among equally short ones
  double ci_level = 0.95;
};

PmfSummary summarize(const PosteriorPmf& pmf, double ci_level = 0.95);

// Frequency posterior for a bucket holding count c_j under the
// Dirichlet-process species model with concentration theta split across J
// buckets.  Exact and analytically normalized.
PosteriorPmf dp_freq_posterior(std::int64_t c_j, double theta, std::int64_t J);

// Exact two-parameter posterior by enumeration of the factorial-coefficient
// sums.  Gate: prod_k (c_k + 2) <= 1e7, else GateError.
PosteriorPmf pyp_freq_posterior_exact(const Sketch& sk, std::int64_t j,
                                      const PypParams& params);

struct McOptions {
  std::int64_t iterations = 200000;
  std::uint64_t seed = 1;
};

// Importance-sampling estimate of the same posterior; entries come with
// delta-method standard errors.  Deterministic given the seed.
PosteriorPmf pyp_freq_posterior_mc(const Sketch& sk, std::int64_t j,
                                   const PypParams& params,
                                   const McOptions& opts);

// Large-count limit of the posterior mean: c_j (gamma/alpha)(1 - alpha) /
// (gamma + J alpha - alpha + 1).
double pyp_mean_asymptotic(std::int64_t c_j, const PypParams& params,
                           std::int64_t J);

// Generic numeric posterior for a normalized random measure given by spec,
// with optional tilts.  Quadrature-based; gates: sum_k c_k <= 64 and J <= 8.
PosteriorPmf pk_freq_posterior_numeric(const Sketch& sk, std::int64_t j,
                                       const CrmSpec& spec,
                                       const PkTilt& tilt);

// The count itself (the one-row count-min baseline).
std::int64_t cms_baseline(const Sketch& sk, std::int64_t j);

// log Pr[counts] under the Dirichlet species model: marginal likelihood of
// the bucketed counts, used for fitting theta.
double dp_sketch_log_marginal(const Sketch& sk, double theta);

}  // namespace sketchpost
