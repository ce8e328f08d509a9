#include "sketchpost/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sketchpost/errors.hpp"
#include "sketchpost/fitting.hpp"
#include "sketchpost/hashing.hpp"

namespace sketchpost {

namespace {

constexpr std::int64_t kMaxCorpusTokens = 20'000'000;

std::int64_t bin_index_for(const std::vector<EvalBin>& bins, double f) {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (f > bins[i].lower && f <= bins[i].upper) return std::int64_t(i);
  }
  return -1;
}

std::string method_name(const EvalOptions& opts) {
  switch (opts.estimator) {
    case EvalEstimator::kCmsBaseline:
      return "CMS";
    case EvalEstimator::kDp:
      return opts.fit ? "DP-fit" : "DP";
    case EvalEstimator::kPyp:
      return opts.fit ? "PYP-prefix-fit" : "PYP";
  }
  return "unknown";
}

}  // namespace

std::vector<EvalBin> dyadic_bins(std::int64_t max_freq) {
  std::vector<EvalBin> bins;
  bins.push_back({0.0, 1.0});
  double hi = 1.0;
  while (hi < double(max_freq)) {
    bins.push_back({hi, 2.0 * hi});
    hi *= 2.0;
  }
  return bins;
}

std::int64_t dyadic_bin_index(std::int64_t f) {
  if (f < 1) throw DomainError("dyadic bins stratify frequencies >= 1");
  if (f == 1) return 0;
  return 1 + std::int64_t(std::floor(std::log2(double(f - 1))));
}

std::vector<EvalReport> evaluate_corpus(const std::vector<std::string>& tokens,
                                        const EvalOptions& opts,
                                        const PerSymbolSink& sink) {
  if (tokens.empty()) throw DomainError("evaluation corpus is empty");
  if (std::int64_t(tokens.size()) > kMaxCorpusTokens) {
    throw GateError(
        "corpus exceeds the exact ground-truth counting gate (2e7 tokens); "
        "evaluate a uniform sample of the stream instead");
  }
  if (opts.widths.empty()) throw DomainError("need at least one width J");
  if (opts.seeds.empty()) throw DomainError("need at least one seed");
  for (std::int64_t J : opts.widths) {
    if (J < 1) throw DomainError("width J must be >= 1");
  }
  if (opts.estimator == EvalEstimator::kDp && !opts.fit && opts.theta <= 0) {
    throw DomainError("theta must be positive");
  }
  if (opts.estimator == EvalEstimator::kPyp && !opts.fit) {
    opts.pyp.validate();
  }

  // Exact ground truth: distinct symbols with their true frequencies.
  std::unordered_map<std::string, std::int64_t> truth;
  truth.reserve(tokens.size() / 4 + 16);
  for (const std::string& t : tokens) ++truth[t];
  std::int64_t max_freq = 0;
  for (const auto& [sym, f] : truth) max_freq = std::max(max_freq, f);

  std::vector<EvalBin> bins =
      opts.bins.empty() ? dyadic_bins(max_freq) : opts.bins;
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
    if (bins[i].upper > bins[i + 1].lower) {
      throw DomainError("bins must be non-overlapping and ordered");
    }
  }

  // Stable iteration order for deterministic per-symbol dumps.
  std::vector<const std::pair<const std::string, std::int64_t>*> symbols;
  symbols.reserve(truth.size());
  for (const auto& kv : truth) symbols.push_back(&kv);
  std::sort(symbols.begin(), symbols.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });

  const std::string method = method_name(opts);
  std::vector<EvalReport> reports;
  reports.reserve(opts.widths.size());

  for (std::int64_t J : opts.widths) {
    std::vector<double> abs_err_sum(bins.size(), 0.0);
    std::vector<std::int64_t> bin_counts(bins.size(), 0);
    bool counts_done = false;

    for (std::uint64_t seed : opts.seeds) {
      HashFunction h = new_hash(seed, J);
      Sketch sk = sketch_stream(tokens, h);

      double theta = opts.theta;
      PypParams pyp = opts.pyp;
      if (opts.fit) {
        if (opts.estimator == EvalEstimator::kDp) {
          theta = fit_dp_theta(sk).params_hat.at("theta");
        } else if (opts.estimator == EvalEstimator::kPyp) {
          std::int64_t n_prefix = std::min<std::int64_t>(
              opts.fit_prefix_tokens, std::int64_t(tokens.size()));
          std::vector<std::string> prefix(tokens.begin(),
                                          tokens.begin() + n_prefix);
          FitReport fr = fit_pyp_prefix(prefix, h);
          pyp.alpha = fr.params_hat.at("alpha");
          pyp.gamma = fr.params_hat.at("gamma");
        }
      }

      for (const auto* kv : symbols) {
        const std::string& sym = kv->first;
        const std::int64_t f_true = kv->second;
        const std::int64_t bucket = hash_key(h, sym);
        const std::int64_t c = sk.counts[std::size_t(bucket)];
        double estimate = 0.0;
        switch (opts.estimator) {
          case EvalEstimator::kCmsBaseline:
            estimate = double(c);
            break;
          case EvalEstimator::kDp:
            estimate = double(c) * double(J) / (double(J) + theta);
            break;
          case EvalEstimator::kPyp:
            estimate = pyp_mean_asymptotic(c, pyp, J);
            break;
        }
        const std::int64_t b = bin_index_for(bins, double(f_true));
        if (b >= 0) {
          abs_err_sum[std::size_t(b)] += std::abs(estimate - double(f_true));
          if (!counts_done) ++bin_counts[std::size_t(b)];
        }
        if (sink) sink(J, seed, sym, f_true, bucket, c, estimate);
      }
      counts_done = true;
    }

    EvalReport rep;
    rep.bins = bins;
    rep.counts_per_bin = bin_counts;
    rep.mae_per_bin.assign(bins.size(),
                           std::numeric_limits<double>::quiet_NaN());
    const double n_seeds = double(opts.seeds.size());
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (bin_counts[i] > 0) {
        rep.mae_per_bin[i] = abs_err_sum[i] / (double(bin_counts[i]) * n_seeds);
      }
    }
    rep.method = method;
    rep.width_J = J;
    rep.seeds = opts.seeds;
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::string eval_reports_to_csv(const std::vector<EvalReport>& reports) {
  std::string out = "J,method,bin_lower,bin_upper,count,mae\n";
  for (const EvalReport& rep : reports) {
    for (std::size_t i = 0; i < rep.bins.size(); ++i) {
      out += std::to_string(rep.width_J);
      out += ',';
      out += rep.method;
      out += ',';
      out += std::to_string(rep.bins[i].lower);
      out += ',';
      out += std::to_string(rep.bins[i].upper);
      out += ',';
      out += std::to_string(rep.counts_per_bin[i]);
      out += ',';
      const double mae = rep.mae_per_bin[i];
      out += std::isnan(mae) ? std::string("nan") : std::to_string(mae);
      out += '\n';
    }
  }
  return out;
}

std::string eval_reports_to_json(const std::vector<EvalReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const EvalReport& rep : reports) {
    nlohmann::json j;
    j["J"] = rep.width_J;
    j["method"] = rep.method;
    j["seeds"] = rep.seeds;
    nlohmann::json bins = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.bins.size(); ++i) {
      nlohmann::json cell;
      cell["lower"] = rep.bins[i].lower;
      cell["upper"] = rep.bins[i].upper;
      cell["count"] = rep.counts_per_bin[i];
      if (std::isnan(rep.mae_per_bin[i])) {
        cell["mae"] = nullptr;
      } else {
        cell["mae"] = rep.mae_per_bin[i];
      }
      bins.push_back(cell);
    }
    j["bins"] = bins;
    arr.push_back(j);
  }
  return arr.dump();
}

}  // namespace sketchpost
