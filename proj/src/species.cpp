#include "sketchpost/species.hpp"

#include <algorithm>
#include <cmath>

#include "pyp_sums.hpp"
#include "sketchpost/errors.hpp"
#include "sketchpost/logspace.hpp"
#include "sketchpost/quadrature.hpp"
#include "sketchpost/rng.hpp"

namespace sketchpost {

using detail::check_bucket;
using detail::check_exact_gate;
using detail::conv_row;
using detail::tilted_total;

void DpParams::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("concentration theta must be positive and finite");
  }
}

void PypParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("discount alpha must lie in (0, 1)");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("strength gamma must be positive and finite");
  }
}

void PkTilt::validate() const {
  if (!(gamma_tilt >= 0.0) || !std::isfinite(gamma_tilt)) {
    throw DomainError("gamma tilt must be >= 0 and finite");
  }
  if (!(beta_tilt >= 0.0) || !std::isfinite(beta_tilt)) {
    throw DomainError("beta tilt must be >= 0 and finite");
  }
}

double PosteriorPmf::prob(std::int64_t l) const {
  if (l < 0 || l > support_max()) return 0.0;
  return std::exp(log_probs[std::size_t(l)]);
}

PmfSummary summarize(const PosteriorPmf& pmf, double ci_level) {
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw DomainError("interval level must lie in (0, 1)");
  }
  if (pmf.log_probs.empty()) throw DomainError("empty pmf");
  const std::size_t L = pmf.log_probs.size();
  std::vector<long double> p(L);
  long double total = 0.0L;
  for (std::size_t l = 0; l < L; ++l) {
    p[l] = std::exp((long double)pmf.log_probs[l]);
    total += p[l];
  }
  if (!(total > 0.0L)) throw DomainError("pmf has no mass");

  PmfSummary out;
  out.ci_level = ci_level;

  long double acc = 0.0L;
  for (std::size_t l = 0; l < L; ++l) acc += (long double)l * p[l];
  out.mean = double(acc / total);

  long double half = total * 0.5L;
  acc = 0.0L;
  for (std::size_t l = 0; l < L; ++l) {
    acc += p[l];
    if (acc >= half) {
      out.median = std::int64_t(l);
      break;
    }
  }

  std::size_t mode = 0;
  for (std::size_t l = 1; l < L; ++l) {
    if (pmf.log_probs[l] > pmf.log_probs[mode]) mode = l;
  }
  out.mode = std::int64_t(mode);

  // Shortest consecutive window holding at least the target mass; leftmost
  // among equally short windows.  The tiny slack keeps exact ties (a window
  // whose mass equals the level up to roundoff) inside the interval.
  const long double target =
      total * (long double)ci_level * (1.0L - 1e-12L);
  std::size_t best_lo = 0, best_hi = L - 1;
  std::size_t hi = 0;
  long double window = p[0];
  for (std::size_t lo = 0; lo < L; ++lo) {
    while (window < target && hi + 1 < L) {
      ++hi;
      window += p[hi];
    }
    if (window >= target && hi - lo < best_hi - best_lo) {
      best_lo = lo;
      best_hi = hi;
    }
    window -= p[lo];  // now covers p[lo+1 .. hi] (empty when hi == lo)
  }
  out.ci_lower = std::int64_t(best_lo);
  out.ci_upper = std::int64_t(best_hi);
  return out;
}

PosteriorPmf dp_freq_posterior(std::int64_t c_j, double theta, std::int64_t J) {
  if (c_j < 0) throw DomainError("bucket count must be >= 0");
  if (J < 1) throw DomainError("width J must be >= 1");
  DpParams{theta}.validate();
  const double vt = theta / double(J);
  const double c = double(c_j);
  PosteriorPmf pmf;
  pmf.method_tag = "DP-exact";
  pmf.log_probs.resize(std::size_t(c_j) + 1);
  // P(0) = vt / (vt + c); successive ratios telescope the rising factorials,
  // which keeps entries accurate for counts up to 1e5 and beyond.
  pmf.log_probs[0] = std::log(vt) - std::log(vt + c);
  for (std::int64_t l = 0; l < c_j; ++l) {
    pmf.log_probs[std::size_t(l + 1)] =
        pmf.log_probs[std::size_t(l)] + std::log(c - double(l)) -
        std::log(vt + c - double(l) - 1.0);
  }
  // The telescoped ratios drift by O(c * eps); renormalize so the entries
  // sum to one at full precision even for counts in the 1e5 range.
  long double mx = pmf.log_probs[0];
  for (double lp : pmf.log_probs) mx = std::max(mx, (long double)lp);
  long double tot = 0.0L;
  for (double lp : pmf.log_probs) tot += std::exp((long double)lp - mx);
  const double log_norm = double(mx + std::log(tot));
  for (double& lp : pmf.log_probs) lp -= log_norm;
  return pmf;
}

PosteriorPmf pyp_freq_posterior_exact(const Sketch& sk, std::int64_t j,
                                      const PypParams& params) {
  params.validate();
  check_bucket(sk, j);
  check_exact_gate(sk.counts);
  const std::int64_t c_j = sk.counts[std::size_t(j)];
  const double g = params.gamma / params.alpha;
  const double log_J = std::log(double(sk.width_J));
  std::int64_t max_row = c_j + 1;
  for (std::int64_t c : sk.counts) max_row = std::max(max_row, c);
  auto table = gfc_table(max_row, params.alpha);

  std::vector<double> poly_off{0.0};
  for (std::int64_t k = 0; k < sk.width_J; ++k) {
    if (k == j) continue;
    poly_off = conv_row(poly_off, sk.counts[std::size_t(k)], *table);
  }
  const double log_den =
      tilted_total(conv_row(poly_off, c_j + 1, *table), g, log_J);

  PosteriorPmf pmf;
  pmf.method_tag = "PYP-exact";
  pmf.log_probs.resize(std::size_t(c_j) + 1);
  const double log_pref = std::log(params.alpha) - log_J;
  for (std::int64_t l = 0; l <= c_j; ++l) {
    double log_num =
        tilted_total(conv_row(poly_off, c_j - l, *table), g + 1.0, log_J);
    pmf.log_probs[std::size_t(l)] = log_pref + log_binom(c_j, l) +
                                    log_rising(1.0 - params.alpha, l) +
                                    log_num - log_den;
  }
  return pmf;
}

PosteriorPmf pyp_freq_posterior_mc(const Sketch& sk, std::int64_t j,
                                   const PypParams& params,
                                   const McOptions& opts) {
  params.validate();
  check_bucket(sk, j);
  if (opts.iterations < 2) throw DomainError("need at least 2 iterations");
  const std::int64_t c_j = sk.counts[std::size_t(j)];
  const std::int64_t n = sk.total_n;
  const double alpha = params.alpha;
  const double gamma = params.gamma;
  const double g = gamma / alpha;
  const double log_J = std::log(double(sk.width_J));

  // lgamma lookup tables over the reachable block-count totals.
  std::vector<double> lgb(std::size_t(n) + 3), lgb1(std::size_t(n) + 3);
  for (std::size_t s = 0; s < lgb.size(); ++s) {
    lgb[s] = std::lgamma(g + double(s));
    lgb1[s] = std::lgamma(g + 1.0 + double(s));
  }
  const double lgb0 = lgb[0];

  std::vector<LogSumAccumulator> acc_w(std::size_t(c_j) + 1),
      acc_w2(std::size_t(c_j) + 1), acc_wv(std::size_t(c_j) + 1);
  LogSumAccumulator acc_v, acc_v2;

  std::vector<std::int32_t> traj(std::size_t(c_j) + 2);
  for (std::int64_t t = 0; t < opts.iterations; ++t) {
    CounterRng rng = CounterRng::from_seed(opts.seed, std::uint64_t(t));
    // Query bucket: record the block count after every seat, through the
    // extra (c_j + 1)-th customer used by the denominator.
    std::int64_t big_k = 0;
    traj[0] = 0;
    for (std::int64_t i = 0; i <= c_j; ++i) {
      double p_new = (gamma + double(big_k) * alpha) / (gamma + double(i));
      if (rng.next_unit() < p_new) ++big_k;
      traj[std::size_t(i + 1)] = std::int32_t(big_k);
    }
    // Remaining buckets: endpoint block counts only.
    std::int64_t s_off = 0;
    double loff = 0.0;
    for (std::int64_t k = 0; k < sk.width_J; ++k) {
      if (k == j) continue;
      std::int64_t kk = 0;
      const std::int64_t ck = sk.counts[std::size_t(k)];
      for (std::int64_t i = 0; i < ck; ++i) {
        double p_new = (gamma + double(kk) * alpha) / (gamma + double(i));
        if (rng.next_unit() < p_new) ++kk;
      }
      s_off += kk;
      loff += lgb[std::size_t(kk)] - lgb0;
    }
    const std::int64_t kd = traj[std::size_t(c_j) + 1];
    const std::int64_t sd = s_off + kd;
    const double log_v = lgb[std::size_t(sd)] - double(sd) * log_J -
                         (loff + lgb[std::size_t(kd)] - lgb0);
    acc_v.add(log_v);
    acc_v2.add(2.0 * log_v);
    for (std::int64_t l = 0; l <= c_j; ++l) {
      const std::int64_t kl = traj[std::size_t(c_j - l)];
      const std::int64_t s = s_off + kl;
      const double log_w = lgb1[std::size_t(s)] - double(s) * log_J -
                           (loff + lgb[std::size_t(kl)] - lgb0);
      acc_w[std::size_t(l)].add(log_w);
      acc_w2[std::size_t(l)].add(2.0 * log_w);
      acc_wv[std::size_t(l)].add(log_w + log_v);
    }
  }

  const double log_t = std::log(double(opts.iterations));
  const double lse_v = acc_v.log_total();
  if (lse_v == kNegInf || !std::isfinite(lse_v)) {
    throw DegenerateMcError("sample mass for the normalizing term vanished");
  }
  const double rel_var_v = std::expm1(acc_v2.log_total() + log_t - 2.0 * lse_v);

  PosteriorPmf pmf;
  pmf.method_tag = "PYP-MC";
  pmf.log_probs.resize(std::size_t(c_j) + 1);
  std::vector<double> rel_sd(std::size_t(c_j) + 1);
  const double log_pref = std::log(alpha) - log_J;
  for (std::int64_t l = 0; l <= c_j; ++l) {
    const double lse_w = acc_w[std::size_t(l)].log_total();
    if (lse_w == kNegInf) throw DegenerateMcError("sample mass vanished");
    pmf.log_probs[std::size_t(l)] =
        log_pref + log_binom(c_j, l) + log_rising(1.0 - alpha, l) +
        log_rising(gamma, c_j - l) - log_rising(gamma, c_j + 1) +
        (lse_w - log_t) - (lse_v - log_t);
    const double rel_var_w =
        std::expm1(acc_w2[std::size_t(l)].log_total() + log_t - 2.0 * lse_w);
    const double rel_cov = std::expm1(acc_wv[std::size_t(l)].log_total() +
                                      log_t - lse_w - lse_v);
    double rel_var = (rel_var_w + rel_var_v - 2.0 * rel_cov) /
                     double(opts.iterations);
    rel_sd[std::size_t(l)] = std::sqrt(std::max(0.0, rel_var));
  }
  // Normalize; standard errors rescale by the same constant.
  const double log_z = log_sum_exp(pmf.log_probs);
  if (!std::isfinite(log_z)) {
    throw DegenerateMcError("estimated pmf has no finite mass");
  }
  std::vector<double> se(std::size_t(c_j) + 1);
  for (std::size_t l = 0; l < pmf.log_probs.size(); ++l) {
    pmf.log_probs[l] -= log_z;
    se[l] = std::exp(pmf.log_probs[l]) * rel_sd[l];
  }
  pmf.stderrs = std::move(se);
  return pmf;
}

double pyp_mean_asymptotic(std::int64_t c_j, const PypParams& params,
                           std::int64_t J) {
  params.validate();
  if (c_j < 0) throw DomainError("bucket count must be >= 0");
  if (J < 1) throw DomainError("width J must be >= 1");
  const double a = params.alpha, gmm = params.gamma;
  return double(c_j) * (gmm / a) * (1.0 - a) /
         (gmm + double(J) * a - a + 1.0);
}

PosteriorPmf pk_freq_posterior_numeric(const Sketch& sk, std::int64_t j,
                                       const CrmSpec& spec,
                                       const PkTilt& tilt) {
  spec.validate();
  tilt.validate();
  check_bucket(sk, j);
  if (sk.total_n > 64) {
    throw GateError("numeric posterior gate: sum of counts must be <= 64");
  }
  if (sk.width_J > 8) {
    throw GateError("numeric posterior gate: width J must be <= 8");
  }
  const std::int64_t c_j = sk.counts[std::size_t(j)];
  const double vt = spec.total_mass_theta / double(sk.width_J);
  const double power = double(sk.total_n) + tilt.gamma_tilt;
  std::int64_t m_max = c_j + 1;
  for (std::int64_t c : sk.counts) m_max = std::max(m_max, c);

  auto off_terms = [&](const std::vector<double>& log_phi) {
    double s = 0.0;
    for (std::int64_t k = 0; k < sk.width_J; ++k) {
      if (k == j) continue;
      s += log_phi[std::size_t(sk.counts[std::size_t(k)])];
    }
    return s;
  };

  auto integral = [&](std::int64_t order_j, std::int64_t kappa_m) {
    auto log_f = [&](double u) {
      if (u <= 0.0) return kNegInf;
      std::vector<double> log_phi =
          phi_derivatives(spec, vt, u + tilt.beta_tilt, m_max);
      double s = power * std::log(u) + off_terms(log_phi) +
                 log_phi[std::size_t(order_j)];
      if (kappa_m >= 1) s += crm_kappa(spec, u + tilt.beta_tilt, kappa_m);
      return s;
    };
    LogIntegralResult r = log_integrate_semi_infinite(log_f, 1e-9);
    if (!r.converged) {
      throw AccuracyError("posterior integral did not converge", r.rel_error);
    }
    return r.log_value;
  };

  const double log_den = integral(c_j + 1, 0);
  if (log_den == kNegInf) {
    throw DomainError("posterior normalizer vanished; check tilt parameters");
  }
  PosteriorPmf pmf;
  pmf.method_tag = "PK-numeric";
  pmf.log_probs.resize(std::size_t(c_j) + 1);
  for (std::int64_t l = 0; l <= c_j; ++l) {
    pmf.log_probs[std::size_t(l)] = std::log(vt) + log_binom(c_j, l) +
                                    integral(c_j - l, l + 1) - log_den;
  }
  return pmf;
}

std::int64_t cms_baseline(const Sketch& sk, std::int64_t j) {
  check_bucket(sk, j);
  return sk.counts[std::size_t(j)];
}

double dp_sketch_log_marginal(const Sketch& sk, double theta) {
  DpParams{theta}.validate();
  check_bucket(sk, 0);
  const double vt = theta / double(sk.width_J);
  double ll = std::lgamma(double(sk.total_n) + 1.0) -
              log_rising(theta, sk.total_n);
  for (std::int64_t c : sk.counts) {
    ll += log_rising(vt, c) - std::lgamma(double(c) + 1.0);
  }
  return ll;
}

}  // namespace sketchpost
