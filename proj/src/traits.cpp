#include "sketchpost/traits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "sketchpost/errors.hpp"
#include "sketchpost/logspace.hpp"
#include "sketchpost/optimize.hpp"
#include "sketchpost/quadrature.hpp"

namespace sketchpost {

namespace {

void check_width(std::int64_t J) {
  if (J < 1) throw DomainError("bucket count J must be >= 1");
}

void check_mass(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("trait mass theta must be positive and finite");
  }
}

PosteriorPmf finish_pmf(std::vector<double> log_weights, const char* tag) {
  normalize_log_probs(log_weights);
  PosteriorPmf pmf;
  pmf.log_probs = std::move(log_weights);
  pmf.method_tag = tag;
  return pmf;
}

}  // namespace

void TraitQuery::validate() const {
  if (c < 0) throw DomainError("bucket total c must be >= 0");
  if (b < 1) throw DomainError("new row's bucket total b must be >= 1");
  if (a < 1 || a > b) throw DomainError("trait share a must lie in [1, b]");
  if (n < 1) throw DomainError("row count n must be >= 1");
}

void IbpPoissonParams::validate() const {
  check_mass(theta);
  if (!(lambda_rate > 0.0) || !std::isfinite(lambda_rate)) {
    throw DomainError("mark rate lambda must be positive and finite");
  }
  crm.validate();
}

// Gamma measure: the kernel ratio collapses to a ratio of gamma functions and
// every power of the rate cancels, leaving
//   w(l) = binom(c, l) (l + a - 1)! Gamma(vt + c + b - l - a) / Gamma(vt + c + b)
// with vt = theta / J.
PosteriorPmf poisson_gamma_posterior(const TraitQuery& q, double theta,
                                     std::int64_t J) {
  q.validate();
  check_width(J);
  check_mass(theta);
  const double vt = theta / double(J);
  const double log_tail = std::lgamma(vt + double(q.c + q.b));
  std::vector<double> logw(std::size_t(q.c) + 1);
  for (std::int64_t l = 0; l <= q.c; ++l) {
    logw[std::size_t(l)] = log_binom(q.c, l) + std::lgamma(double(l + q.a)) +
                           std::lgamma(vt + double(q.c + q.b - l - q.a)) -
                           log_tail;
  }
  return finish_pmf(std::move(logw), "Traits-PoissonGamma");
}

std::vector<double> poisson_gamma_log_joint(const TraitQuery& q, double theta,
                                            std::int64_t J) {
  q.validate();
  check_width(J);
  check_mass(theta);
  const double vt = theta / double(J);
  const double base = std::log(vt) + log_binom(q.b, q.a) -
                      std::lgamma(vt + double(q.c + q.b));
  std::vector<double> logw(std::size_t(q.c) + 1);
  for (std::int64_t l = 0; l <= q.c; ++l) {
    logw[std::size_t(l)] = base + log_binom(q.c, l) +
                           std::lgamma(double(l + q.a)) +
                           std::lgamma(vt + double(q.c + q.b - l - q.a));
  }
  return logw;
}

PosteriorPmf poisson_gg_posterior(const TraitQuery& q,
                                  const IbpPoissonParams& params,
                                  std::int64_t J) {
  q.validate();
  params.validate();
  check_width(J);
  const auto* gg = std::get_if<GeneralizedGammaCrm>(&params.crm.family);
  if (gg == nullptr) {
    throw DomainError(
        "factorial-coefficient path requires a generalized-gamma measure");
  }
  if (q.c + q.b > 10000) {
    throw GateError("factorial-coefficient sums are gated at c + b <= 10000");
  }
  const double vt = params.theta / double(J);
  const double u = double(q.n + 1) * params.lambda_rate;
  auto table = gfc_table(q.c + q.b, gg->alpha);
  const double log_tail =
      log_phi_gg_closed(vt, gg->alpha, gg->tau, u, q.c + q.b, *table);
  std::vector<double> logw(std::size_t(q.c) + 1);
  for (std::int64_t l = 0; l <= q.c; ++l) {
    logw[std::size_t(l)] =
        log_binom(q.c, l) + crm_kappa(params.crm, u, l + q.a) +
        log_phi_gg_closed(vt, gg->alpha, gg->tau, u, q.c - l + q.b - q.a,
                          *table) -
        log_tail;
  }
  return finish_pmf(std::move(logw), "Traits-PoissonGG");
}

PosteriorPmf poisson_general_posterior(const TraitQuery& q,
                                       const IbpPoissonParams& params,
                                       std::int64_t J) {
  q.validate();
  params.validate();
  check_width(J);
  const double vt = params.theta / double(J);
  const double u = double(q.n + 1) * params.lambda_rate;
  const std::vector<double> log_phi =
      phi_derivatives(params.crm, vt, u, q.c + q.b);
  const double log_tail = log_phi[std::size_t(q.c + q.b)];
  std::vector<double> logw(std::size_t(q.c) + 1);
  for (std::int64_t l = 0; l <= q.c; ++l) {
    logw[std::size_t(l)] = log_binom(q.c, l) +
                           crm_kappa(params.crm, u, l + q.a) +
                           log_phi[std::size_t(q.c - l + q.b - q.a)] - log_tail;
  }
  return finish_pmf(std::move(logw), "Traits-PoissonGeneral");
}

PosteriorPmf bernoulli_approx_posterior(std::int64_t c, std::int64_t b,
                                        std::int64_t n, const CrmSpec& spec,
                                        std::int64_t J) {
  spec.validate();
  check_width(J);
  if (c < 0) throw DomainError("bucket total c must be >= 0");
  if (b < 1) throw DomainError("query row's bucket total b must be >= 1");
  if (n < 1) throw DomainError("row count n must be >= 1");
  const auto* sb = std::get_if<StableBetaCrm>(&spec.family);
  if (sb == nullptr) {
    throw DomainError("binary-trait posterior requires a stable-beta measure");
  }
  const double vt = spec.total_mass_theta / double(J);
  // Poissonizing the per-row Bernoulli draws turns the n + 1 exposures of the
  // non-queried atoms into the exponential tilt at u = n + 1.
  const double u = double(n + 1);
  const std::vector<double> log_phi = phi_derivatives(spec, vt, u, c + b - 1);
  const std::int64_t l_top = std::min(c, n);
  std::vector<double> logw(std::size_t(c) + 1, kNegInf);
  for (std::int64_t l = 0; l <= l_top; ++l) {
    // integral_0^1 (s^l - s^n) (1 - s)^{beta - 1} ds; vanishes at l = n, so
    // that support point keeps zero mass (an artifact of the approximation).
    const double integral =
        l == n ? 0.0
               : stable_beta_weighted_integral(sb->beta, [l, n](double s) {
                   return std::pow(s, double(l)) - std::pow(s, double(n));
                 });
    if (!(integral > 0.0)) continue;
    logw[std::size_t(l)] = std::lgamma(double(c) + 1.0) -
                           std::lgamma(double(c - l) + 1.0) + log_binom(n, l) +
                           log_phi[std::size_t(c + b - l - 1)] +
                           std::log(integral);
  }
  return finish_pmf(std::move(logw), "Traits-BernoulliApprox");
}

double bernoulli_tv_bound(const CrmSpec& spec, std::int64_t J) {
  spec.validate();
  check_width(J);
  if (!std::holds_alternative<StableBetaCrm>(spec.family)) {
    throw DomainError("the error bound applies to stable-beta measures");
  }
  const double vt = spec.total_mass_theta / double(J);
  // The exponent carries the per-unit-mass Laplace exponent, not the
  // mass-weighted one, so the bound is exactly linear in theta/J.
  auto integrand = [&](double u) {
    return std::exp(-crm_psi(spec, u) + crm_kappa(spec, u, 2));
  };
  QuadratureResult res = integrate_semi_infinite(integrand, 1e-12, 1e-8);
  if (!res.converged) {
    throw AccuracyError("error-bound integral did not converge",
                        res.abs_error);
  }
  return 2.0 * vt * res.value;
}

// Bucket totals under the gamma-measure Poisson trait model: marginalizing
// the bucket mass T_j ~ Gamma(theta/J, 1) over C_j | T_j ~ Poisson(n lambda
// T_j) gives independent negative binomials with shape theta/J and odds
// n*lambda, so
//   log Pr[c] = sum_j [ c_j log(n lambda) - (theta/J + c_j) log(1 + n lambda)
//                       + log (theta/J)_(c_j) - log c_j! ].
double ibp_poisson_gamma_log_marginal(const Sketch& sk, std::int64_t n_rows,
                                      double theta, double lambda_rate) {
  if (n_rows < 1) throw DomainError("row count must be >= 1");
  if (sk.width_J < 1 || sk.counts.empty()) {
    throw DomainError("sketch must have at least one bucket");
  }
  check_mass(theta);
  if (!(lambda_rate > 0.0) || !std::isfinite(lambda_rate)) {
    throw DomainError("mark rate lambda must be positive and finite");
  }
  const double vt = theta / double(sk.width_J);
  const double nlam = double(n_rows) * lambda_rate;
  const double log_rate = std::log(nlam);
  const double log_one_plus = std::log1p(nlam);
  double ll = 0.0;
  for (std::int64_t cj : sk.counts) {
    if (cj < 0) throw DomainError("bucket totals must be nonnegative");
    ll += double(cj) * log_rate - (vt + double(cj)) * log_one_plus +
          log_rising(vt, cj) - std::lgamma(double(cj) + 1.0);
  }
  return ll;
}

// The likelihood depends on (theta, lambda) only through theta and the
// product n*lambda; for fixed theta the inner optimum is lambda = total /
// (n * theta), which reduces the fit to a one-dimensional search over
// log theta.
FitReport fit_ibp_poisson_gamma(const Sketch& sk, std::int64_t n_rows) {
  if (n_rows < 1) throw DomainError("row count must be >= 1");
  if (sk.width_J < 1 || sk.counts.empty()) {
    throw DomainError("sketch must have at least one bucket");
  }
  std::int64_t total = 0;
  for (std::int64_t cj : sk.counts) {
    if (cj < 0) throw DomainError("bucket totals must be nonnegative");
    total += cj;
  }
  if (total < 1) {
    throw DomainError("cannot fit trait-model parameters from an empty sketch");
  }

  const double n = double(n_rows);
  FitReport report;

  auto profile_loglik = [&](double log_theta) {
    const double theta = std::exp(log_theta);
    const double lambda = double(total) / (n * theta);
    const double ll = ibp_poisson_gamma_log_marginal(sk, n_rows, theta, lambda);
    report.objective_trace.push_back({{theta, lambda}, ll});
    return -ll;
  };

  const double lo = std::log(1e-3);
  const double hi = std::log(1e8);
  BrentResult res = brent_minimize(profile_loglik, lo, hi, 1e-10, 300);

  const double theta_hat = std::exp(res.x);
  report.params_hat["theta"] = theta_hat;
  report.params_hat["lambda"] = double(total) / (n * theta_hat);
  report.converged = res.converged;
  report.boundary_hit = res.x < lo + 1e-6 || res.x > hi - 1e-6;
  return report;
}

}  // namespace sketchpost
