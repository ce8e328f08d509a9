#pragma once

#include <cstdint>
#include <vector>

#include "sketchpost/fitting.hpp"
#include "sketchpost/hashing.hpp"
#include "sketchpost/species.hpp"
#include "sketchpost/specialfns.hpp"

namespace sketchpost {

// Conditioning cell for a trait-count query: a bucket whose trait totals sum
// to c over the n previous rows, a new row contributing b to that bucket, of
// which a belongs to the queried trait.
struct TraitQuery {
  std::int64_t c = 0;  // bucket total over the n previous rows, >= 0
  std::int64_t b = 1;  // new row's bucket total, >= 1
  std::int64_t a = 1;  // queried trait's share of b, in [1, b]
  std::int64_t n = 1;  // number of previous rows, >= 1
  void validate() const;
};

struct IbpPoissonParams {
  double theta = 1.0;        // total trait mass, > 0
  double lambda_rate = 1.0;  // per-row mark rate scale, > 0
  CrmSpec crm = CrmSpec::gamma(1.0);
  void validate() const;
};

// Posterior of the queried trait's total count l over the previous rows,
// normalized over l = 0..c for the given a.  Gamma-measure closed form (the
// rate scale cancels).
PosteriorPmf poisson_gamma_posterior(const TraitQuery& q, double theta,
                                     std::int64_t J);

// Same cell posterior under a generalized-gamma measure, via the
// factorial-coefficient sums.  Gate: c + b <= 1e4.
PosteriorPmf poisson_gg_posterior(const TraitQuery& q,
                                  const IbpPoissonParams& params,
                                  std::int64_t J);

// Generic engine for any measure family, through the derivative recurrence.
PosteriorPmf poisson_general_posterior(const TraitQuery& q,
                                       const IbpPoissonParams& params,
                                       std::int64_t J);

// Unnormalized log joint weights of (l, a) including the (theta/J) and
// binom(b, a) prefactors, for callers that need cross-cell mass.
std::vector<double> poisson_gamma_log_joint(const TraitQuery& q, double theta,
                                            std::int64_t J);

// Binary-trait posterior of the queried trait's count among n previous rows,
// for a stable-beta measure; support l = 0..min(c, n).  The closed expression
// drops row-assignment terms that vanish as the bucket load thins, so it is
// an approximation whose error is certified by bernoulli_tv_bound.
// Requires b >= 1 (the query row exhibits the trait).
PosteriorPmf bernoulli_approx_posterior(std::int64_t c, std::int64_t b,
                                        std::int64_t n, const CrmSpec& spec,
                                        std::int64_t J);

// Uniform bound on the total-variation error of the approximation above:
// 2 (theta/J) * integral exp(-psi(u)) kappa(u, 2) du, linear in theta/J.
double bernoulli_tv_bound(const CrmSpec& spec, std::int64_t J);

// log Pr[bucket totals] under the gamma-measure Poisson trait model: the
// totals are independent negative binomials with shape theta/J and odds
// n * lambda per bucket.
double ibp_poisson_gamma_log_marginal(const Sketch& sk, std::int64_t n_rows,
                                      double theta, double lambda_rate);

// Maximum-likelihood (theta, lambda) for the same model from bucket totals.
// The profile optimum in lambda is lambda = (sum_j c_j) / (n theta), so the
// search is one-dimensional over log theta.
FitReport fit_ibp_poisson_gamma(const Sketch& sk, std::int64_t n_rows);

}  // namespace sketchpost
