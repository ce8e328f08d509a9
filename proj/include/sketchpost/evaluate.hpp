#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sketchpost/species.hpp"

namespace sketchpost {

// True-frequency stratum (lower, upper].
struct EvalBin {
  double lower = 0.0;
  double upper = 0.0;
};

// Which per-bucket frequency estimator the harness applies.
//   kCmsBaseline: the raw count c_j (one-row count-min).
//   kDp:          Dirichlet posterior mean c_j * J / (J + theta).
//   kPyp:         two-parameter asymptotic mean (the only tractable choice
//                 when every distinct symbol is queried at scale).
enum class EvalEstimator { kCmsBaseline, kDp, kPyp };

struct EvalOptions {
  std::vector<std::int64_t> widths;    // J values, one report per entry
  std::vector<std::uint64_t> seeds;    // hash seeds averaged over
  EvalEstimator estimator = EvalEstimator::kDp;
  bool fit = false;       // fit the prior per (J, seed) instead of fixing it
  double theta = 1.0;     // fixed Dirichlet concentration when !fit
  PypParams pyp{};        // fixed two-parameter values when !fit
  std::int64_t fit_prefix_tokens = 10000;  // prefix length for the PYP fit
  std::vector<EvalBin> bins;  // empty -> dyadic (0,1],(1,2],(2,4],... default
};

// Stratified mean absolute error for one sketch width, averaged over seeds.
struct EvalReport {
  std::vector<EvalBin> bins;
  std::vector<double> mae_per_bin;          // NaN for empty bins
  std::vector<std::int64_t> counts_per_bin;  // distinct symbols per stratum
  std::string method;
  std::int64_t width_J = 0;
  std::vector<std::uint64_t> seeds;
};

// Dyadic default bins (0,1],(1,2],(2,4],(4,8],... covering max_freq.
std::vector<EvalBin> dyadic_bins(std::int64_t max_freq);

// Index of the dyadic bin holding true frequency f >= 1.
std::int64_t dyadic_bin_index(std::int64_t f);

// Optional per-symbol dump: called once per (J, seed, distinct symbol) with
// the truth and the estimate, so reports can be recomputed independently.
using PerSymbolSink = std::function<void(
    std::int64_t width_J, std::uint64_t seed, std::string_view symbol,
    std::int64_t true_freq, std::int64_t bucket, std::int64_t bucket_count,
    double estimate)>;

// For each width J and seed: hash the corpus, build the sketch, optionally
// fit the prior, estimate every distinct symbol's frequency from its bucket
// count, and accumulate |estimate - truth| per true-frequency bin.  Returns
// one report per width with MAEs averaged across seeds.
// Gate: at most 2e7 tokens (exact ground-truth counting is in-memory);
// larger corpora raise GateError suggesting evaluation on a sample.
std::vector<EvalReport> evaluate_corpus(const std::vector<std::string>& tokens,
                                        const EvalOptions& opts,
                                        const PerSymbolSink& sink = nullptr);

// Machine-readable renderings of the reports, suitable for plotting.
// CSV columns: J,method,bin_lower,bin_upper,count,mae.
std::string eval_reports_to_csv(const std::vector<EvalReport>& reports);
std::string eval_reports_to_json(const std::vector<EvalReport>& reports);

}  // namespace sketchpost
