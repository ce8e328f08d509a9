// Acceptance harness: fifteen pinned end-to-end criteria, one PASS/FAIL line
// each, tolerances fixed in code.  The exit code is the number of failed
// criteria, so a fully green run exits 0.
//
// Criterion 5 is expected to fail: the pinned target constant for the
// joint-growth posterior-mean ratio is internally inconsistent with the exact
// small-instance oracles this suite itself verifies (see the notes printed
// under that criterion).  The failure is reported honestly rather than
// retuned.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracle_utils.hpp"
#include "sketchpost/cardinality.hpp"
#include "sketchpost/errors.hpp"
#include "sketchpost/evaluate.hpp"
#include "sketchpost/fitting.hpp"
#include "sketchpost/hashing.hpp"
#include "sketchpost/rng.hpp"
#include "sketchpost/simulate.hpp"
#include "sketchpost/specialfns.hpp"
#include "sketchpost/species.hpp"
#include "sketchpost/traits.hpp"

namespace sp = sketchpost;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return std::string(buf);
}

sp::Sketch make_sketch(std::vector<std::int64_t> counts) {
  sp::Sketch sk;
  sk.width_J = std::int64_t(counts.size());
  sk.total_n = 0;
  for (std::int64_t c : counts) sk.total_n += c;
  sk.counts = std::move(counts);
  sk.hash_seed = 0;
  return sk;
}

std::vector<double> pmf_probs(const sp::PosteriorPmf& pmf) {
  std::vector<double> p(pmf.log_probs.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(pmf.log_probs[i]);
  return p;
}

double pmf_mean(const sp::PosteriorPmf& pmf) {
  double mean = 0.0;
  for (std::size_t l = 0; l < pmf.log_probs.size(); ++l) {
    mean += double(l) * std::exp(pmf.log_probs[l]);
  }
  return mean;
}

std::vector<std::string> label_tokens(const std::vector<std::int64_t>& labels) {
  std::vector<std::string> tokens;
  tokens.reserve(labels.size());
  for (std::int64_t x : labels) tokens.push_back(std::to_string(x));
  return tokens;
}

// ---------------------------------------------------------------------------
// 1. Species posteriors against the exhaustive partition oracle.
// ---------------------------------------------------------------------------
Outcome criterion1() {
  constexpr double kTolDp = 1e-10;
  constexpr double kTolPyp = 1e-8;
  double max_dp = 0.0;
  double max_pyp = 0.0;
  for (std::int64_t n = 1; n <= 6; ++n) {
    for (double theta : {0.5, 2.0, 10.0}) {
      sp::PartitionOracleResult oracle =
          sp::partition_oracle(n, 2, sp::DpParams{theta});
      for (std::int64_t c0 = 0; c0 <= n; ++c0) {
        const std::vector<std::int64_t> counts{c0, n - c0};
        for (std::int64_t j = 0; j < 2; ++j) {
          std::vector<double> cond = oracle.conditional_freq(counts, j);
          std::vector<double> lib =
              pmf_probs(sp::dp_freq_posterior(counts[std::size_t(j)], theta, 2));
          for (std::size_t l = 0; l < cond.size(); ++l) {
            max_dp = std::max(max_dp, std::abs(cond[l] - lib[l]));
          }
        }
      }
    }
    for (double alpha : {0.25, 0.5, 0.75}) {
      for (double gamma : {0.5, 1.0}) {
        const sp::PypParams params{alpha, gamma};
        sp::PartitionOracleResult oracle = sp::partition_oracle(n, 2, params);
        for (std::int64_t c0 = 0; c0 <= n; ++c0) {
          const std::vector<std::int64_t> counts{c0, n - c0};
          sp::Sketch sk = make_sketch(counts);
          for (std::int64_t j = 0; j < 2; ++j) {
            std::vector<double> cond = oracle.conditional_freq(counts, j);
            std::vector<double> lib =
                pmf_probs(sp::pyp_freq_posterior_exact(sk, j, params));
            for (std::size_t l = 0; l < cond.size(); ++l) {
              max_pyp = std::max(max_pyp, std::abs(cond[l] - lib[l]));
            }
          }
        }
      }
    }
  }
  Outcome oc;
  oc.pass = max_dp <= kTolDp && max_pyp <= kTolPyp;
  oc.detail = fmt("max one-parameter err %.2e (tol 1e-10), "
                  "max two-parameter err %.2e (tol 1e-8)",
                  max_dp, max_pyp);
  return oc;
}

// ---------------------------------------------------------------------------
// 2. Normalization of the one-parameter posterior at scale.
// ---------------------------------------------------------------------------
Outcome criterion2() {
  constexpr double kTol = 1e-12;
  const std::int64_t cs[] = {1, 5, 10, 50, 100, 500, 1000, 10000, 50000, 100000};
  const double vts[] = {1e-3, 0.1, 1.0, 31.6, 1e3};
  double max_dev = 0.0;
  int cases = 0;
  for (std::int64_t c : cs) {
    for (double vt : vts) {
      sp::PosteriorPmf pmf = sp::dp_freq_posterior(c, vt, 1);
      long double total = 0.0L;
      for (double lp : pmf.log_probs) total += std::exp((long double)lp);
      max_dev = std::max(max_dev, std::abs(double(total - 1.0L)));
      ++cases;
    }
  }
  Outcome oc;
  oc.pass = max_dev <= kTol && cases == 50;
  oc.detail = fmt("max |sum - 1| = %.2e over %d cases (tol 1e-12)", max_dev,
                  cases);
  return oc;
}

// ---------------------------------------------------------------------------
// 3. Monte Carlo posterior against the exact one, entrywise 3-sigma.
// ---------------------------------------------------------------------------
Outcome criterion3() {
  const sp::Sketch sk = make_sketch({3, 2, 2});
  const sp::PypParams params{0.5, 1.0};
  const std::uint64_t seeds[] = {1, 2, 3, 4, 5};
  int min_passes = 5;
  int entries = 0;
  for (std::int64_t j = 0; j < 3; ++j) {
    std::vector<double> exact =
        pmf_probs(sp::pyp_freq_posterior_exact(sk, j, params));
    std::vector<int> pass_count(exact.size(), 0);
    for (std::uint64_t seed : seeds) {
      sp::McOptions opts;
      opts.iterations = 200000;
      opts.seed = seed;
      sp::PosteriorPmf mc = sp::pyp_freq_posterior_mc(sk, j, params, opts);
      std::vector<double> est = pmf_probs(mc);
      const std::vector<double>& se = *mc.stderrs;
      for (std::size_t l = 0; l < exact.size(); ++l) {
        if (std::abs(est[l] - exact[l]) <= 3.0 * se[l] + 1e-15) {
          ++pass_count[l];
        }
      }
    }
    for (int pc : pass_count) min_passes = std::min(min_passes, pc);
    entries += int(exact.size());
  }
  Outcome oc;
  oc.pass = min_passes >= 4;
  oc.detail = fmt("every entry within 3 stderr in >= %d/5 seeds "
                  "(%d entries; need 4/5)",
                  min_passes, entries);
  return oc;
}

// ---------------------------------------------------------------------------
// 4. Small-discount continuity of the two-parameter posterior.
// ---------------------------------------------------------------------------
Outcome criterion4() {
  constexpr double kTol = 1e-3;
  const sp::Sketch sk = make_sketch({2, 1});
  double max_diff = 0.0;
  for (std::int64_t j = 0; j < 2; ++j) {
    std::vector<double> pyp =
        pmf_probs(sp::pyp_freq_posterior_exact(sk, j, {1e-6, 1.0}));
    std::vector<double> dp =
        pmf_probs(sp::dp_freq_posterior(sk.counts[std::size_t(j)], 1.0, 2));
    for (std::size_t l = 0; l < pyp.size(); ++l) {
      max_diff = std::max(max_diff, std::abs(pyp[l] - dp[l]));
    }
  }
  Outcome oc;
  oc.pass = max_diff < kTol;
  oc.detail = fmt("max entry diff %.2e at discount 1e-6 (tol 1e-3)", max_diff);
  return oc;
}

// ---------------------------------------------------------------------------
// 5. Large-count posterior-mean ratio against the pinned constant 1/6.5.
// ---------------------------------------------------------------------------
Outcome criterion5() {
  constexpr double kTarget = 1.0 / 6.5;
  constexpr double kRelTol = 0.10;
  const std::int64_t c = 800;
  sp::Sketch sk = make_sketch(std::vector<std::int64_t>(10, c));
  sp::McOptions opts;
  opts.iterations = 200000;
  opts.seed = 12345;
  sp::PosteriorPmf pmf = sp::pyp_freq_posterior_mc(sk, 0, {0.5, 1.0}, opts);
  const double ratio = pmf_mean(pmf) / double(c);
  Outcome oc;
  oc.pass = std::abs(ratio - kTarget) <= kRelTol * kTarget;
  oc.detail = fmt("MC mean/c = %.4f vs target %.4f +/- 10%% "
                  "(J=10, c=800, discount 0.5, strength 1)",
                  ratio, kTarget);
  if (!oc.pass) {
    oc.notes.push_back(
        "the target corresponds to (gamma/alpha)(1-alpha)/(gamma+J*alpha-alpha+1)"
        " = 0.1538, which carries a spurious gamma/alpha factor: the iterated"
        " limit (single bucket count -> inf) of the exact posterior mean ratio"
        " is (1-alpha)/(gamma+J*alpha-alpha+1) = 0.0769 for these parameters.");
    oc.notes.push_back(
        "with every bucket count growing jointly -- the regime simulated here --"
        " the ratio converges to a third, weakly J-dependent value near 0.318"
        " at J=10; the measured 0.3176 matches that regime, so the sampler is"
        " consistent and the pinned constant is what disagrees.");
  }
  return oc;
}

// ---------------------------------------------------------------------------
// 6. Concentration recovery from sketched one-parameter streams.
// ---------------------------------------------------------------------------
Outcome criterion6() {
  constexpr double kTrueTheta = 10.0;
  constexpr double kRelTol = 0.20;
  double theta_sum = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    std::vector<std::int64_t> labels =
        sp::sample_pyp_sequence(sp::DpParams{kTrueTheta}, 50000, 1000 + s);
    sp::HashFunction h = sp::new_hash(s, 512);
    sp::Sketch sk = sp::sketch_stream(label_tokens(labels), h);
    theta_sum += sp::fit_dp_theta(sk).params_hat.at("theta");
  }
  const double theta_avg = theta_sum / 10.0;
  Outcome oc;
  oc.pass = std::abs(theta_avg - kTrueTheta) <= kRelTol * kTrueTheta;
  oc.detail = fmt("mean theta-hat %.3f over 10 seeds vs 10 +/- 20%%", theta_avg);
  return oc;
}

// ---------------------------------------------------------------------------
// 7. Stratified error shrinks with width on the two lowest strata.
// ---------------------------------------------------------------------------
Outcome criterion7() {
  Outcome oc;
  oc.pass = true;
  std::string parts;
  for (double theta : {5.0, 20.0}) {
    std::vector<std::int64_t> labels = sp::sample_pyp_sequence(
        sp::DpParams{theta}, 50000, 600 + std::uint64_t(theta));
    sp::EvalOptions opts;
    opts.widths = {128, 512, 2048};
    opts.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    opts.estimator = sp::EvalEstimator::kDp;
    opts.theta = theta;
    std::vector<sp::EvalReport> reports =
        sp::evaluate_corpus(label_tokens(labels), opts);
    for (std::size_t bin = 0; bin < 2; ++bin) {
      for (const sp::EvalReport& rep : reports) {
        if (rep.counts_per_bin[bin] <= 0) oc.pass = false;
      }
      for (std::size_t w = 1; w < reports.size(); ++w) {
        if (!(reports[w].mae_per_bin[bin] <=
              reports[w - 1].mae_per_bin[bin])) {
          oc.pass = false;
        }
      }
      parts += fmt("%stheta=%g bin%zu: %.3f/%.3f/%.3f", parts.empty() ? "" : "; ",
                   theta, bin + 1, reports[0].mae_per_bin[bin],
                   reports[1].mae_per_bin[bin], reports[2].mae_per_bin[bin]);
    }
  }
  oc.detail = "MAE over J=128/512/2048 non-increasing (" + parts + ")";
  return oc;
}

// ---------------------------------------------------------------------------
// 8. Two-parameter prefix fit beats the one-parameter fit on power-law data.
// ---------------------------------------------------------------------------
Outcome criterion8() {
  std::vector<std::string> tokens =
      label_tokens(sp::sample_zipf(1.3, 200000, 0, 99));
  sp::EvalOptions base;
  base.widths = {32, 128};
  base.seeds = {1, 2, 3};
  base.fit = true;

  sp::EvalOptions dp_opts = base;
  dp_opts.estimator = sp::EvalEstimator::kDp;
  std::vector<sp::EvalReport> dp_reports = sp::evaluate_corpus(tokens, dp_opts);

  sp::EvalOptions pyp_opts = base;
  pyp_opts.estimator = sp::EvalEstimator::kPyp;
  std::vector<sp::EvalReport> pyp_reports =
      sp::evaluate_corpus(tokens, pyp_opts);

  Outcome oc;
  oc.pass = true;
  std::string parts;
  for (std::size_t w = 0; w < dp_reports.size(); ++w) {
    for (std::size_t bin = 0; bin < 2; ++bin) {
      const double dp_mae = dp_reports[w].mae_per_bin[bin];
      const double pyp_mae = pyp_reports[w].mae_per_bin[bin];
      if (!(pyp_mae < dp_mae)) oc.pass = false;
      parts += fmt("%sJ=%lld bin%zu %.3f<%.3f", parts.empty() ? "" : "; ",
                   (long long)dp_reports[w].width_J, bin + 1, pyp_mae, dp_mae);
    }
  }
  oc.detail = "prefix-fitted two-parameter MAE strictly below one-parameter "
              "fit (" + parts + ")";
  return oc;
}

// ---------------------------------------------------------------------------
// 9. Cardinality recovery accuracy plus internal identities.
// ---------------------------------------------------------------------------
Outcome criterion9() {
  constexpr double kRelTol = 0.10;
  constexpr double kIdTol = 1e-8;
  double rel_sum = 0.0;
  double max_id = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::vector<std::int64_t> labels =
        sp::sample_pyp_sequence(sp::DpParams{100.0}, 10000, 700 + s);
    const double k_true =
        double(std::set<std::int64_t>(labels.begin(), labels.end()).size());
    sp::HashFunction h = sp::new_hash(s, 128);
    sp::Sketch sk = sp::sketch_stream(label_tokens(labels), h);
    sp::CardinalityEstimate est = sp::dp_cardinality(sk, 100.0);
    rel_sum += std::abs(est.k_hat - k_true) / k_true;
    double m_total = 0.0;
    for (double m : est.m_hat) m_total += m;
    max_id = std::max(max_id, std::abs(est.k_hat - m_total) /
                                  std::max(1.0, est.k_hat));
  }
  const double rel_avg = rel_sum / 20.0;

  // Digamma closed form versus the termwise sum on random sketches.
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<std::int64_t> count_dist(0, 30);
  std::uniform_real_distribution<double> log_theta(std::log(0.1),
                                                   std::log(100.0));
  double max_closed = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::int64_t> counts(64);
    for (auto& c : counts) c = count_dist(rng);
    sp::Sketch sk = make_sketch(counts);
    const double theta = std::exp(log_theta(rng));
    sp::CardinalityEstimate est = sp::dp_cardinality(sk, theta);
    const double closed = sp::dp_cardinality_closed_form(sk, theta);
    max_closed = std::max(max_closed, std::abs(est.k_hat - closed) /
                                          std::max(1.0, est.k_hat));
  }
  Outcome oc;
  oc.pass = rel_avg <= kRelTol && max_id <= kIdTol && max_closed <= kIdTol;
  oc.detail = fmt("mean |k-hat - K|/K = %.3f (tol 0.10); profile-sum identity "
                  "%.1e; closed-form vs sum %.1e (tol 1e-8)",
                  rel_avg, max_id, max_closed);
  return oc;
}

// ---------------------------------------------------------------------------
// 10. Exact occupancy recovery equals the partition-oracle expectation.
// ---------------------------------------------------------------------------
Outcome criterion10() {
  constexpr double kTol = 1e-6;
  double max_diff = 0.0;
  for (std::int64_t n = 1; n <= 6; ++n) {
    for (const sp::PypParams& params :
         {sp::PypParams{0.5, 1.0}, sp::PypParams{0.25, 0.5}}) {
      sp::PartitionCardinalityOracle oracle =
          sp::partition_oracle_cardinality(n, 2, params);
      for (std::int64_t c0 = 0; c0 <= n; ++c0) {
        const std::vector<std::int64_t> counts{c0, n - c0};
        sp::Sketch sk = make_sketch(counts);
        sp::CardinalityEstimate est = sp::pyp_cardinality(
            sk, params, sp::CardinalityMethod::kExactTiny);
        std::vector<double> expect = oracle.expected_m(counts);
        for (std::int64_t l = 1; l <= n; ++l) {
          max_diff = std::max(
              max_diff, std::abs(est.m_at(l) - expect[std::size_t(l - 1)]));
        }
      }
    }
  }
  Outcome oc;
  oc.pass = max_diff <= kTol;
  oc.detail = fmt("max |m-hat(l) - E[M_l|C]| = %.2e over n<=6, J=2 (tol 1e-6)",
                  max_diff);
  return oc;
}

// ---------------------------------------------------------------------------
// 11. Trait posteriors: frozen values, engine agreement, one-parameter match.
// ---------------------------------------------------------------------------
Outcome criterion11() {
  constexpr double kFrozenTol = 1e-6;
  constexpr double kNormTol = 1e-12;
  constexpr double kEngineTol = 1e-9;
  constexpr double kDpTol = 1e-10;

  // Frozen triple at c=2, b=1, mass-per-bucket 0.1.
  sp::PosteriorPmf frozen = sp::poisson_gamma_posterior({2, 1, 1, 1}, 1.0, 10);
  std::vector<double> fp = pmf_probs(frozen);
  const double targets[] = {0.047619, 0.086580, 0.865801};
  double frozen_err = 0.0;
  long double norm = 0.0L;
  for (std::size_t l = 0; l < fp.size(); ++l) {
    frozen_err = std::max(frozen_err, std::abs(fp[l] - targets[l]));
    norm += (long double)fp[l];
  }
  const double norm_err = std::abs(double(norm - 1.0L));

  // 20-case grid: the recurrence engine vs both family fast paths.
  double engine_err = 0.0;
  int grid_cases = 0;
  for (double theta : {0.5, 2.0}) {
    for (std::int64_t c : {0, 1, 3, 6, 10}) {
      const sp::TraitQuery q{c, 2, 1, 3};
      sp::IbpPoissonParams params;
      params.theta = theta;
      params.lambda_rate = 1.0;
      params.crm = sp::CrmSpec::gamma(theta);
      std::vector<double> fast =
          pmf_probs(sp::poisson_gamma_posterior(q, theta, 4));
      std::vector<double> gen =
          pmf_probs(sp::poisson_general_posterior(q, params, 4));
      for (std::size_t l = 0; l < fast.size(); ++l) {
        engine_err = std::max(engine_err, std::abs(fast[l] - gen[l]));
      }
      ++grid_cases;
    }
  }
  for (double alpha : {0.25, 0.6}) {
    for (double tau : {0.7, 1.5}) {
      for (std::int64_t c : {1, 4}) {
        if (grid_cases >= 20) break;
        const sp::TraitQuery q{c, 2, 1, 3};
        sp::IbpPoissonParams params;
        params.theta = 0.8;
        params.lambda_rate = 1.0;
        params.crm = sp::CrmSpec::generalized_gamma(0.8, alpha, tau);
        std::vector<double> fast =
            pmf_probs(sp::poisson_gg_posterior(q, params, 4));
        std::vector<double> gen =
            pmf_probs(sp::poisson_general_posterior(q, params, 4));
        for (std::size_t l = 0; l < fast.size(); ++l) {
          engine_err = std::max(engine_err, std::abs(fast[l] - gen[l]));
        }
        ++grid_cases;
      }
    }
  }
  for (std::int64_t c : {2, 8}) {
    const sp::TraitQuery q{c, 2, 1, 3};
    sp::IbpPoissonParams params;
    params.theta = 0.8;
    params.lambda_rate = 1.0;
    params.crm = sp::CrmSpec::generalized_gamma(0.8, 0.4, 1.0);
    std::vector<double> fast = pmf_probs(sp::poisson_gg_posterior(q, params, 4));
    std::vector<double> gen =
        pmf_probs(sp::poisson_general_posterior(q, params, 4));
    for (std::size_t l = 0; l < fast.size(); ++l) {
      engine_err = std::max(engine_err, std::abs(fast[l] - gen[l]));
    }
    ++grid_cases;
  }

  // The unit-share case coincides with the species posterior.
  double dp_err = 0.0;
  for (std::int64_t c = 0; c <= 8; ++c) {
    std::vector<double> traits =
        pmf_probs(sp::poisson_gamma_posterior({c, 1, 1, 5}, 0.7, 3));
    std::vector<double> species = pmf_probs(sp::dp_freq_posterior(c, 0.7, 3));
    for (std::size_t l = 0; l < traits.size(); ++l) {
      dp_err = std::max(dp_err, std::abs(traits[l] - species[l]));
    }
  }

  Outcome oc;
  oc.pass = frozen_err <= kFrozenTol && norm_err <= kNormTol &&
            engine_err <= kEngineTol && dp_err <= kDpTol && grid_cases == 20;
  oc.detail = fmt("frozen triple err %.1e (tol 1e-6); norm err %.1e; engine vs "
                  "fast paths %.1e over %d cases (tol 1e-9); species match %.1e",
                  frozen_err, norm_err, engine_err, grid_cases, dp_err);
  return oc;
}

// ---------------------------------------------------------------------------
// 12. Trait sampler conditional law against the closed-form posterior.
// ---------------------------------------------------------------------------
Outcome criterion12() {
  constexpr std::int64_t kDraws = 1000000;
  constexpr std::int64_t kJ = 16;
  constexpr double kTheta = 2.0;
  const sp::CrmSpec spec = sp::CrmSpec::gamma(kTheta);

  // tally[c][l]: accepted query cells with previous-rows bucket total c and
  // queried-trait previous total l (query row contributes exactly one mark).
  std::vector<std::vector<std::int64_t>> tally(4);
  for (std::int64_t c = 0; c <= 3; ++c) tally[std::size_t(c)].assign(std::size_t(c) + 1, 0);

  for (std::int64_t r = 0; r < kDraws; ++r) {
    sp::IbpSample sample = sp::sample_ibp_poisson_gamma(
        kTheta, 1.0, spec, 20, 10000, 12000000 + std::uint64_t(r));
    // Uniform bucket per trait, assigned in sorted-id order.
    std::set<std::int64_t> ids;
    for (const auto& row : sample.rows) {
      for (const auto& [trait, level] : row) ids.insert(trait);
    }
    sp::CounterRng bucket_rng =
        sp::CounterRng::from_seed(900000000 + std::uint64_t(r), 3);
    std::map<std::int64_t, std::int64_t> bucket;
    for (std::int64_t id : ids) bucket[id] = bucket_rng.next_below(kJ);

    std::vector<std::int64_t> c_prev(kJ, 0);
    for (std::size_t row = 0; row + 1 < sample.rows.size(); ++row) {
      for (const auto& [trait, level] : sample.rows[row]) {
        c_prev[std::size_t(bucket[trait])] += level;
      }
    }
    std::vector<std::int64_t> b_query(kJ, 0);
    std::vector<std::int64_t> query_trait(kJ, -1);
    for (const auto& [trait, level] : sample.rows.back()) {
      b_query[std::size_t(bucket[trait])] += level;
      query_trait[std::size_t(bucket[trait])] = trait;
    }
    for (std::int64_t j = 0; j < kJ; ++j) {
      if (b_query[std::size_t(j)] != 1) continue;
      const std::int64_t c = c_prev[std::size_t(j)];
      if (c > 3) continue;
      const std::int64_t t_star = query_trait[std::size_t(j)];
      std::int64_t l = 0;
      for (std::size_t row = 0; row + 1 < sample.rows.size(); ++row) {
        auto it = sample.rows[row].find(t_star);
        if (it != sample.rows[row].end()) l += it->second;
      }
      ++tally[std::size_t(c)][std::size_t(l)];
    }
  }

  double max_z = 0.0;
  std::int64_t min_cell = kDraws;
  for (std::int64_t c = 0; c <= 3; ++c) {
    std::int64_t total = 0;
    for (std::int64_t cnt : tally[std::size_t(c)]) total += cnt;
    min_cell = std::min(min_cell, total);
    std::vector<double> expect =
        pmf_probs(sp::poisson_gamma_posterior({c, 1, 1, 19}, kTheta, kJ));
    for (std::size_t l = 0; l < expect.size(); ++l) {
      const double p = expect[l];
      const double se = std::sqrt(p * (1.0 - p) / double(total));
      const double phat = double(tally[std::size_t(c)][l]) / double(total);
      if (se > 0.0) max_z = std::max(max_z, std::abs(phat - p) / se);
    }
  }
  Outcome oc;
  oc.pass = max_z <= 3.0 && min_cell >= 1000;
  oc.detail = fmt("max |z| = %.2f over conditional cells c=0..3 "
                  "(3-sigma bands; smallest cell %lld draws)",
                  max_z, (long long)min_cell);
  return oc;
}

// ---------------------------------------------------------------------------
// 13. Binary-trait approximation: empirical TV within the printed bound,
//     and the bound against an independent Monte Carlo integral.
// ---------------------------------------------------------------------------
Outcome criterion13() {
  const sp::CrmSpec spec = sp::CrmSpec::stable_beta(1.0, 1.0);
  const double bound = sp::bernoulli_tv_bound(spec, 2);

  // Empirical conditional law by rejection over exact binary-trait samples.
  constexpr std::int64_t kDraws = 1000000;
  std::vector<std::int64_t> tally(4, 0);
  bool support_ok = true;
  for (std::int64_t r = 0; r < kDraws; ++r) {
    sp::IbpSample sample = sp::sample_ibp_poisson_gamma(
        1.0, 1.0, spec, 5, 10000, 31000000 + std::uint64_t(r));
    std::set<std::int64_t> ids;
    for (const auto& row : sample.rows) {
      for (const auto& [trait, level] : row) ids.insert(trait);
    }
    sp::CounterRng bucket_rng =
        sp::CounterRng::from_seed(77000000 + std::uint64_t(r), 5);
    std::map<std::int64_t, std::int64_t> bucket;
    for (std::int64_t id : ids) bucket[id] = bucket_rng.next_below(2);

    for (std::int64_t j = 0; j < 2; ++j) {
      std::int64_t c = 0;
      for (std::size_t row = 0; row + 1 < sample.rows.size(); ++row) {
        for (const auto& [trait, level] : sample.rows[row]) {
          if (bucket[trait] == j) c += level;
        }
      }
      std::int64_t b = 0;
      std::int64_t t_star = -1;
      for (const auto& [trait, level] : sample.rows.back()) {
        if (bucket[trait] == j) {
          b += level;
          t_star = trait;
        }
      }
      if (c != 3 || b != 1) continue;
      std::int64_t l = 0;
      for (std::size_t row = 0; row + 1 < sample.rows.size(); ++row) {
        if (sample.rows[row].count(t_star) > 0) ++l;
      }
      if (l > 3) {
        support_ok = false;
        continue;
      }
      ++tally[std::size_t(l)];
    }
  }
  std::int64_t accepted = 0;
  for (std::int64_t cnt : tally) accepted += cnt;
  std::vector<double> approx =
      pmf_probs(sp::bernoulli_approx_posterior(3, 1, 4, spec, 2));
  double tv = 0.0;
  for (std::size_t l = 0; l < 4; ++l) {
    const double phat = double(tally[l]) / double(accepted);
    const double q = l < approx.size() ? approx[l] : 0.0;
    tv += std::abs(phat - q);
  }
  tv *= 0.5;

  // Independent Monte Carlo evaluaton of
  //   2 (theta/J) * integral_0^inf exp(-psi(u)) kappa(u, 2) du
  // for the unit-shape kernel on (0,1), via u = t/(1-t).
  constexpr double kEuler = 0.5772156649015329;
  auto integrand = [](double u) {
    if (u < 1e-4) {
      return std::exp(-u) * (0.5 - u / 3.0 + u * u / 8.0);
    }
    const double e1 = -std::expint(-u);
    const double kappa2 = (1.0 - std::exp(-u) * (1.0 + u)) / (u * u);
    return std::exp(-kEuler - e1) / u * kappa2;
  };
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long double acc = 0.0L;
  constexpr std::int64_t kPoints = 1000000;
  for (std::int64_t i = 0; i < kPoints; ++i) {
    const double t = unit(rng);
    const double u = t / (1.0 - t);
    const double jac = (1.0 + u) * (1.0 + u);
    acc += (long double)(integrand(u) * jac);
  }
  const double bound_mc = 2.0 * 0.5 * double(acc / (long double)kPoints);
  const double bound_rel = std::abs(bound - bound_mc) / bound;

  Outcome oc;
  oc.pass = support_ok && tv <= bound && bound_rel <= 0.01 && accepted >= 1000;
  oc.detail = fmt("empirical TV %.4f <= bound %.4f (%lld accepted cells); "
                  "bound vs MC integral rel err %.4f (tol 0.01)",
                  tv, bound, (long long)accepted, bound_rel);
  return oc;
}

// ---------------------------------------------------------------------------
// 14. Special functions: coefficients, partition weights, derivatives,
//     digamma recurrence.
// ---------------------------------------------------------------------------
Outcome criterion14() {
  constexpr double kGfcTol = 1e-12;
  constexpr double kEppfTol = 1e-9;
  constexpr double kPhiTol = 1e-10;
  constexpr double kDigammaTol = 1e-12;

  // (a) log-space triangular recurrence vs the alternating explicit sum.
  double gfc_err = 0.0;
  for (double alpha : {0.25, 0.5, 0.75}) {
    auto table = sp::gfc_table(12, alpha);
    for (int n = 1; n <= 12; ++n) {
      for (int k = 1; k <= n; ++k) {
        const long double brute = oracle::gfc_brute(n, k, (long double)alpha);
        const double lib = std::exp(table->log_at(n, k));
        gfc_err = std::max(
            gfc_err, double(std::abs(((long double)lib - brute) / brute)));
      }
    }
  }

  // (b) partition-weight row sums: the exchangeable weights sum to one.
  double eppf_err = 0.0;
  for (double alpha : {0.3, 0.7}) {
    for (double gamma : {0.5, 2.0}) {
      for (int n = 2; n <= 9; ++n) {
        long double total = 0.0L;
        oracle::for_each_partition_blocks(
            n, [&](const std::vector<std::vector<int>>& blocks) {
              total += oracle::eppf_weight(blocks, n, (long double)alpha,
                                           (long double)gamma);
            });
        eppf_err = std::max(eppf_err, std::abs(double(total - 1.0L)));
      }
    }
  }

  // (c) derivative recurrence vs both closed forms up to order 50.
  double phi_err = 0.0;
  {
    const double vt = 0.3;
    for (double u : {0.2, 1.0, 5.0}) {
      std::vector<double> rec =
          sp::phi_derivatives(sp::CrmSpec::gamma(1.0), vt, u, 50);
      for (std::int64_t m = 0; m <= 50; ++m) {
        const double closed = sp::log_phi_gamma_closed(vt, u, m);
        phi_err = std::max(phi_err,
                           std::abs(rec[std::size_t(m)] - closed) /
                               std::max(1.0, std::abs(closed)));
      }
    }
    const double alpha = 0.4, tau = 1.2;
    auto table = sp::gfc_table(50, alpha);
    for (double u : {0.2, 1.0, 5.0}) {
      std::vector<double> rec = sp::phi_derivatives(
          sp::CrmSpec::generalized_gamma(1.0, alpha, tau), vt, u, 50);
      for (std::int64_t m = 0; m <= 50; ++m) {
        const double closed =
            sp::log_phi_gg_closed(vt, alpha, tau, u, m, *table);
        phi_err = std::max(phi_err,
                           std::abs(rec[std::size_t(m)] - closed) /
                               std::max(1.0, std::abs(closed)));
      }
    }
  }

  // (d) digamma: recurrence psi(x+1) = psi(x) + 1/x and two frozen values.
  double dig_err = 0.0;
  for (int i = 1; i <= 500; ++i) {
    const double x = 0.1 * i;
    const double lhs = sp::digamma(x + 1.0);
    const double rhs = sp::digamma(x) + 1.0 / x;
    dig_err = std::max(dig_err,
                       std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  dig_err = std::max(
      dig_err, std::abs(sp::digamma(1.0) - (-0.5772156649015329)));
  dig_err = std::max(
      dig_err, std::abs(sp::digamma(0.5) - (-1.9635100260214235)));

  Outcome oc;
  oc.pass = gfc_err <= kGfcTol && eppf_err <= kEppfTol && phi_err <= kPhiTol &&
            dig_err <= kDigammaTol;
  oc.detail = fmt("coefficients %.1e (tol 1e-12); partition row sums %.1e "
                  "(tol 1e-9); derivatives %.1e (tol 1e-10); digamma %.1e "
                  "(tol 1e-12)",
                  gfc_err, eppf_err, phi_err, dig_err);
  return oc;
}

// ---------------------------------------------------------------------------
// 15. Latent-feature likelihood fit and its exponent convention.
// ---------------------------------------------------------------------------
Outcome criterion15() {
  constexpr double kThetaTrue = 5.0;
  constexpr double kLambdaTrue = 2.0;
  constexpr std::int64_t kJ = 64;
  constexpr std::int64_t kRows = 2000;
  double theta_sum = 0.0;
  double lambda_sum = 0.0;
  for (int s = 0; s < 10; ++s) {
    std::mt19937_64 rng(3000 + s);
    std::gamma_distribution<double> gd(kThetaTrue / double(kJ), 1.0);
    std::vector<std::int64_t> counts(kJ);
    for (auto& c : counts) {
      std::poisson_distribution<std::int64_t> pd(double(kRows) * kLambdaTrue *
                                                 gd(rng));
      c = pd(rng);
    }
    sp::Sketch sk = make_sketch(counts);
    sp::FitReport rep = sp::fit_ibp_poisson_gamma(sk, kRows);
    theta_sum += rep.params_hat.at("theta");
    lambda_sum += rep.params_hat.at("lambda");
  }
  const double theta_avg = theta_sum / 10.0;
  const double lambda_avg = lambda_sum / 10.0;
  const bool fit_ok =
      std::abs(theta_avg - kThetaTrue) <= 0.25 * kThetaTrue &&
      std::abs(lambda_avg - kLambdaTrue) <= 0.15 * kLambdaTrue;

  // Exponent convention of the marginal, against a tiny-instance Monte Carlo
  // probability oracle (width 1, three rows).
  std::mt19937_64 rng(777);
  std::gamma_distribution<double> gd(0.8, 1.0);
  std::vector<std::int64_t> hits(4, 0);
  constexpr std::int64_t kOracleDraws = 1000000;
  for (std::int64_t i = 0; i < kOracleDraws; ++i) {
    std::poisson_distribution<std::int64_t> pd(3.0 * 0.6 * gd(rng));
    const std::int64_t c = pd(rng);
    if (c <= 3) ++hits[std::size_t(c)];
  }
  double max_rel = 0.0;
  for (std::int64_t c = 0; c <= 3; ++c) {
    sp::Sketch sk1 = make_sketch({c});
    const double exact =
        std::exp(sp::ibp_poisson_gamma_log_marginal(sk1, 3, 0.8, 0.6));
    const double mc = double(hits[std::size_t(c)]) / double(kOracleDraws);
    max_rel = std::max(max_rel, std::abs(mc - exact) / exact);
  }

  Outcome oc;
  oc.pass = fit_ok && max_rel <= 0.02;
  oc.detail = fmt("mean theta-hat %.2f (tol 25%%), mean lambda-hat %.2f "
                  "(tol 15%%) over 10 seeds; marginal vs MC oracle rel err "
                  "%.4f (tol 0.02)",
                  theta_avg, lambda_avg, max_rel);
  return oc;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "species posteriors equal the exhaustive partition oracle",
       criterion1},
      {2, "one-parameter posterior normalizes at scale", criterion2},
      {3, "Monte Carlo posterior within 3 stderr of exact", criterion3},
      {4, "small-discount continuity to the one-parameter posterior",
       criterion4},
      {5, "large-count posterior-mean ratio matches pinned constant",
       criterion5},
      {6, "concentration recovered from sketched streams", criterion6},
      {7, "stratified MAE non-increasing in sketch width", criterion7},
      {8, "power-law fit beats one-parameter fit on low strata", criterion8},
      {9, "cardinality recovery and internal identities", criterion9},
      {10, "exact occupancy equals the partition-oracle expectation",
       criterion10},
      {11, "trait posteriors: frozen values and engine agreement", criterion11},
      {12, "trait sampler conditional law matches the posterior", criterion12},
      {13, "binary-trait TV within its bound; bound matches MC integral",
       criterion13},
      {14, "special functions against brute-force oracles", criterion14},
      {15, "latent-feature fit recovery and exponent convention", criterion15},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome oc;
    try {
      oc = e.fn();
    } catch (const std::exception& ex) {
      oc.pass = false;
      oc.detail = std::string("exception: ") + ex.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] criterion %2d: %s (%s; %.1f s)\n",
                oc.pass ? "PASS" : "FAIL", e.id, e.label, oc.detail.c_str(),
                secs);
    for (const std::string& note : oc.notes) {
      std::printf("       note: %s\n", note.c_str());
    }
    std::fflush(stdout);
    if (!oc.pass) ++failures;
  }
  std::printf("%d/15 criteria passed\n", 15 - failures);
  return failures;
}
