#include "sketchpost/cardinality.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pyp_sums.hpp"
#include "sketchpost/errors.hpp"
#include "sketchpost/logspace.hpp"
#include "sketchpost/rng.hpp"

namespace sketchpost {

using detail::check_bucket;
using detail::check_exact_gate;
using detail::conv_row;
using detail::tilted_total;

double CardinalityEstimate::m_at(std::int64_t l) const {
  if (l < 1 || l > L_max) return 0.0;
  return m_hat[std::size_t(l - 1)];
}

namespace {

std::int64_t max_count(const Sketch& sk) {
  std::int64_t m = 0;
  for (std::int64_t c : sk.counts) m = std::max(m, c);
  return m;
}

// t_l(c) = (c - l + 1)_(l) / (vt + c - l)_(l), evaluated for l = 0..c by the
// stable ratio recurrence t_{l+1} = t_l * (c - l) / (vt + c - l - 1).
// apply(l, log_t) is invoked for every l >= 1.
template <typename F>
void scan_dp_terms(std::int64_t c, double vt, F&& apply) {
  double log_t = 0.0;
  for (std::int64_t l = 0; l < c; ++l) {
    log_t += std::log(double(c - l)) - std::log(vt + double(c - l) - 1.0);
    apply(l + 1, log_t);
  }
}

}  // namespace

PosteriorPmf dp_unconditional_freq(const Sketch& sk, double theta) {
  DpParams{theta}.validate();
  check_bucket(sk, 0);
  const double vt = theta / double(sk.width_J);
  const std::int64_t l_max = max_count(sk);
  const double log_scale = std::log(vt) - std::log(theta + double(sk.total_n));
  std::vector<LogSumAccumulator> acc(std::size_t(l_max) + 1);
  for (std::int64_t c : sk.counts) {
    scan_dp_terms(c, vt, [&acc](std::int64_t l, double log_t) {
      acc[std::size_t(l)].add(log_t);
    });
  }
  PosteriorPmf pmf;
  pmf.method_tag = "DP-exact";
  pmf.log_probs.assign(std::size_t(l_max) + 1, kNegInf);
  // l = 0: every bucket contributes t_0 = 1.
  pmf.log_probs[0] = std::log(theta) - std::log(theta + double(sk.total_n));
  for (std::int64_t l = 1; l <= l_max; ++l) {
    double lt = acc[std::size_t(l)].log_total();
    if (lt != kNegInf) pmf.log_probs[std::size_t(l)] = log_scale + lt;
  }
  return pmf;
}

CardinalityEstimate dp_cardinality(const Sketch& sk, double theta) {
  DpParams{theta}.validate();
  check_bucket(sk, 0);
  const double vt = theta / double(sk.width_J);
  const std::int64_t l_max = max_count(sk);
  std::vector<LogSumAccumulator> acc(std::size_t(l_max) + 1);
  for (std::int64_t c : sk.counts) {
    scan_dp_terms(c, vt, [&acc](std::int64_t l, double log_t) {
      acc[std::size_t(l)].add(log_t);
    });
  }
  CardinalityEstimate est;
  est.method_tag = "DP";
  est.L_max = l_max;
  est.m_hat.assign(std::size_t(l_max), 0.0);
  long double k_hat = 0.0L;
  for (std::int64_t l = 1; l <= l_max; ++l) {
    double lt = acc[std::size_t(l)].log_total();
    if (lt == kNegInf) continue;
    double m = vt / double(l) * std::exp(lt);
    est.m_hat[std::size_t(l - 1)] = m;
    k_hat += m;
  }
  est.k_hat = double(k_hat);
  // Internal cross-check: the digamma identity must reproduce the summed
  // total.  Disagreement means one of the two evaluation paths lost
  // precision, which callers should never silently absorb.
  const double closed = dp_cardinality_closed_form(sk, theta);
  const double diff = std::abs(closed - est.k_hat);
  if (diff > 1e-8 * std::max(1.0, std::abs(est.k_hat))) {
    throw AccuracyError("summed and closed-form distinct-count estimates disagree",
                        diff);
  }
  return est;
}

double dp_cardinality_closed_form(const Sketch& sk, double theta) {
  DpParams{theta}.validate();
  check_bucket(sk, 0);
  const double vt = theta / double(sk.width_J);
  const double base = digamma(vt);
  long double total = 0.0L;
  for (std::int64_t c : sk.counts) {
    if (c == 0) continue;
    total += digamma(vt + double(c)) - base;
  }
  return vt * double(total);
}

namespace {

// Shared machinery for the exact two-parameter sums.  For each distinct
// bucket count v, poly_without[v] is the convolution of every bucket row
// except one bucket of count v.
struct ExactPypSums {
  double g = 0.0;
  double log_J = 0.0;
  std::vector<double> poly_all;
  std::map<std::int64_t, std::int64_t> multiplicity;
  std::map<std::int64_t, std::vector<double>> poly_without;
  std::shared_ptr<const GfcTable> table;

  ExactPypSums(const Sketch& sk, const PypParams& params,
               std::int64_t extra_rows) {
    params.validate();
    check_bucket(sk, 0);
    check_exact_gate(sk.counts);
    g = params.gamma / params.alpha;
    log_J = std::log(double(sk.width_J));
    table = gfc_table(max_count(sk) + extra_rows, params.alpha);
    for (std::int64_t c : sk.counts) ++multiplicity[c];
    poly_all = {0.0};
    for (std::int64_t c : sk.counts) poly_all = conv_row(poly_all, c, *table);
    for (const auto& [v, mult] : multiplicity) {
      std::vector<double> poly{0.0};
      bool skipped = false;
      for (std::int64_t c : sk.counts) {
        if (!skipped && c == v) {
          skipped = true;
          continue;
        }
        poly = conv_row(poly, c, *table);
      }
      poly_without[v] = std::move(poly);
    }
  }
};

}  // namespace

PosteriorPmf pyp_unconditional_freq(const Sketch& sk, const PypParams& params) {
  ExactPypSums sums(sk, params, 1);
  const std::int64_t l_max = max_count(sk);
  const double log_den = tilted_total(sums.poly_all, sums.g, sums.log_J);
  const double log_pref = std::log(params.alpha) - sums.log_J -
                          std::log(params.gamma + double(sk.total_n));
  PosteriorPmf pmf;
  pmf.method_tag = "PYP-exact";
  pmf.log_probs.assign(std::size_t(l_max) + 1, kNegInf);
  // l = 0: the numerator sum is bucket-independent.
  pmf.log_probs[0] = std::log(params.alpha) -
                     std::log(params.gamma + double(sk.total_n)) +
                     tilted_total(sums.poly_all, sums.g + 1.0, sums.log_J) -
                     log_den;
  for (std::int64_t l = 1; l <= l_max; ++l) {
    double acc = kNegInf;
    for (const auto& [v, mult] : sums.multiplicity) {
      if (v < l) continue;
      double log_num = tilted_total(conv_row(sums.poly_without[v], v - l, *sums.table),
                                    sums.g + 1.0, sums.log_J);
      acc = log_add(acc, std::log(double(mult)) + log_binom(v, l) + log_num);
    }
    if (acc == kNegInf) continue;
    pmf.log_probs[std::size_t(l)] = log_pref +
                                    log_rising(1.0 - params.alpha, l) + acc -
                                    log_den;
  }
  return pmf;
}

namespace {

CardinalityEstimate pyp_cardinality_exact(const Sketch& sk,
                                          const PypParams& params) {
  PosteriorPmf pmf = pyp_unconditional_freq(sk, params);
  CardinalityEstimate est;
  est.method_tag = "PYP-exact";
  est.L_max = pmf.support_max();
  est.m_hat.assign(std::size_t(est.L_max), 0.0);
  long double k_hat = 0.0L;
  for (std::int64_t l = 1; l <= est.L_max; ++l) {
    double lp = pmf.log_probs[std::size_t(l)];
    if (lp == kNegInf) continue;
    double m = (params.gamma + double(sk.total_n)) / (double(l) - params.alpha) *
               std::exp(lp);
    est.m_hat[std::size_t(l - 1)] = m;
    k_hat += m;
  }
  est.k_hat = double(k_hat);
  return est;
}

CardinalityEstimate pyp_cardinality_mc(const Sketch& sk,
                                       const PypParams& params,
                                       const McOptions& opts) {
  params.validate();
  check_bucket(sk, 0);
  if (opts.iterations < 2) throw DomainError("need at least 2 iterations");
  const std::int64_t n = sk.total_n;
  const std::int64_t J = sk.width_J;
  const std::int64_t l_max = max_count(sk);
  const double alpha = params.alpha;
  const double gamma = params.gamma;
  const double g = gamma / alpha;
  const double log_J = std::log(double(J));

  std::vector<double> lgb(std::size_t(n) + 2), lgb1(std::size_t(n) + 2);
  for (std::size_t s = 0; s < lgb.size(); ++s) {
    lgb[s] = std::lgamma(g + double(s));
    lgb1[s] = std::lgamma(g + 1.0 + double(s));
  }
  const double lgb0 = lgb[0];
  // log_rising(gamma, m) lookups for the count prefactors.
  std::vector<double> lrg(std::size_t(l_max) + 2);
  for (std::size_t m = 0; m < lrg.size(); ++m) lrg[m] = log_rising(gamma, std::int64_t(m));

  // pref_l = (alpha / (J (l - alpha))) (1 - alpha)_(l)
  std::vector<double> log_pref(std::size_t(l_max) + 1, kNegInf);
  for (std::int64_t l = 1; l <= l_max; ++l) {
    log_pref[std::size_t(l)] = std::log(alpha) - log_J -
                               std::log(double(l) - alpha) +
                               log_rising(1.0 - alpha, l);
  }

  std::vector<LogSumAccumulator> acc_a(std::size_t(l_max) + 1),
      acc_a2(std::size_t(l_max) + 1), acc_av(std::size_t(l_max) + 1);
  LogSumAccumulator acc_v, acc_v2, acc_tot, acc_tot2, acc_totv;

  std::vector<std::vector<std::int32_t>> traj(static_cast<std::size_t>(J));
  for (std::int64_t k = 0; k < J; ++k) {
    traj[std::size_t(k)].resize(std::size_t(sk.counts[std::size_t(k)]) + 1);
  }
  std::vector<double> log_a(std::size_t(l_max) + 1);
  for (std::int64_t t = 0; t < opts.iterations; ++t) {
    CounterRng rng = CounterRng::from_seed(opts.seed, std::uint64_t(t));
    std::int64_t s0 = 0;
    double ltot = 0.0;
    for (std::int64_t k = 0; k < J; ++k) {
      auto& tr = traj[std::size_t(k)];
      std::int64_t kk = 0;
      tr[0] = 0;
      const std::int64_t ck = sk.counts[std::size_t(k)];
      for (std::int64_t i = 0; i < ck; ++i) {
        double p_new = (gamma + double(kk) * alpha) / (gamma + double(i));
        if (rng.next_unit() < p_new) ++kk;
        tr[std::size_t(i + 1)] = std::int32_t(kk);
      }
      s0 += kk;
      ltot += lgb[std::size_t(kk)] - lgb0;
    }
    const double log_v = lgb[std::size_t(s0)] - double(s0) * log_J - ltot;
    acc_v.add(log_v);
    acc_v2.add(2.0 * log_v);

    double log_total_it = kNegInf;
    for (std::int64_t l = 1; l <= l_max; ++l) log_a[std::size_t(l)] = kNegInf;
    for (std::int64_t k = 0; k < J; ++k) {
      const std::int64_t ck = sk.counts[std::size_t(k)];
      const auto& tr = traj[std::size_t(k)];
      const std::int64_t k_end = tr[std::size_t(ck)];
      for (std::int64_t l = 1; l <= ck; ++l) {
        const std::int64_t kl = tr[std::size_t(ck - l)];
        const std::int64_t s = s0 - k_end + kl;
        const double log_w =
            lgb1[std::size_t(s)] - double(s) * log_J -
            (ltot - (lgb[std::size_t(k_end)] - lgb0) + (lgb[std::size_t(kl)] - lgb0));
        const double term = log_binom(ck, l) + lrg[std::size_t(ck - l)] -
                            lrg[std::size_t(ck)] + log_w;
        log_a[std::size_t(l)] = log_add(log_a[std::size_t(l)], term);
      }
    }
    for (std::int64_t l = 1; l <= l_max; ++l) {
      const double la = log_a[std::size_t(l)];
      if (la == kNegInf) continue;
      acc_a[std::size_t(l)].add(la);
      acc_a2[std::size_t(l)].add(2.0 * la);
      acc_av[std::size_t(l)].add(la + log_v);
      log_total_it = log_add(log_total_it, log_pref[std::size_t(l)] + la);
    }
    acc_tot.add(log_total_it);
    acc_tot2.add(2.0 * log_total_it);
    acc_totv.add(log_total_it + log_v);
  }

  const double log_t = std::log(double(opts.iterations));
  const double lse_v = acc_v.log_total();
  if (lse_v == kNegInf || !std::isfinite(lse_v)) {
    throw DegenerateMcError("sample mass for the normalizing term vanished");
  }
  const double rel_var_v = std::expm1(acc_v2.log_total() + log_t - 2.0 * lse_v);

  CardinalityEstimate est;
  est.method_tag = "PYP-MC";
  est.L_max = l_max;
  est.m_hat.assign(std::size_t(l_max), 0.0);
  std::vector<double> se(std::size_t(l_max), 0.0);
  for (std::int64_t l = 1; l <= l_max; ++l) {
    const double lse_a = acc_a[std::size_t(l)].log_total();
    if (lse_a == kNegInf) continue;
    const double log_m = log_pref[std::size_t(l)] + lse_a - lse_v;
    const double m = std::exp(log_m);
    est.m_hat[std::size_t(l - 1)] = m;
    const double rel_var_a =
        std::expm1(acc_a2[std::size_t(l)].log_total() + log_t - 2.0 * lse_a);
    const double rel_cov =
        std::expm1(acc_av[std::size_t(l)].log_total() + log_t - lse_a - lse_v);
    double rel_var =
        (rel_var_a + rel_var_v - 2.0 * rel_cov) / double(opts.iterations);
    se[std::size_t(l - 1)] = m * std::sqrt(std::max(0.0, rel_var));
  }
  const double lse_tot = acc_tot.log_total();
  if (lse_tot != kNegInf) {
    est.k_hat = std::exp(lse_tot - lse_v);
    const double rel_var_tot =
        std::expm1(acc_tot2.log_total() + log_t - 2.0 * lse_tot);
    const double rel_cov_tot =
        std::expm1(acc_totv.log_total() + log_t - lse_tot - lse_v);
    double rel_var = (rel_var_tot + rel_var_v - 2.0 * rel_cov_tot) /
                     double(opts.iterations);
    est.k_hat_stderr = est.k_hat * std::sqrt(std::max(0.0, rel_var));
  }
  est.m_hat_stderrs = std::move(se);
  return est;
}

}  // namespace

CardinalityEstimate pyp_cardinality(const Sketch& sk, const PypParams& params,
                                    CardinalityMethod method,
                                    const McOptions& opts) {
  switch (method) {
    case CardinalityMethod::kExactTiny:
      return pyp_cardinality_exact(sk, params);
    case CardinalityMethod::kMc:
      return pyp_cardinality_mc(sk, params, opts);
  }
  throw DomainError("unknown cardinality method");
}

}  // namespace sketchpost
