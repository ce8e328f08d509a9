// Command-line harness: build sketches from token streams, run frequency /
// cardinality / trait estimation, fit prior parameters, generate synthetic
// corpora, and emit stratified-error evaluation reports.
//
// Exit codes: 0 success, 2 usage, 3 numeric gate, 4 I/O.
// Option precedence: command-line flags > --config file (key=value lines,
// [subcommand] sections) > built-in defaults.  SKETCHPOST_SEED supplies a
// seed when no flag or config entry does.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sketchpost/cardinality.hpp"
#include "sketchpost/errors.hpp"
#include "sketchpost/evaluate.hpp"
#include "sketchpost/fitting.hpp"
#include "sketchpost/hashing.hpp"
#include "sketchpost/serialization.hpp"
#include "sketchpost/simulate.hpp"
#include "sketchpost/species.hpp"
#include "sketchpost/traits.hpp"

namespace sp = sketchpost;
using nlohmann::json;

namespace {

std::vector<std::string> read_tokens(const std::string& path) {
  std::vector<std::string> tokens;
  auto drain = [&tokens](std::istream& in) {
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  };
  if (path == "-") {
    drain(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) throw sp::IoError("cannot open token file: " + path);
    drain(in);
  }
  return tokens;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    sp::write_text_file(out_path, text);
  }
}

// Last-resort seed default: flags and config entries win; the environment
// fills in only when neither spoke.
void apply_env_seed(const CLI::Option* opt, std::uint64_t& seed) {
  if (opt != nullptr && opt->count() > 0) return;
  const char* env = std::getenv("SKETCHPOST_SEED");
  if (env == nullptr) return;
  try {
    std::size_t used = 0;
    seed = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw sp::DomainError("SKETCHPOST_SEED must be an unsigned integer");
  }
}

struct CrmFlags {
  std::string family = "gamma";
  double theta = 1.0;
  double gg_alpha = 0.5;
  double gg_tau = 1.0;
  double sb_beta = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family,
                    "measure family: gamma | gg | stable-beta")
        ->check(CLI::IsMember({"gamma", "gg", "stable-beta"}))
        ->capture_default_str();
    cmd->add_option("--theta", theta, "total measure mass, > 0")
        ->capture_default_str();
    cmd->add_option("--gg-alpha", gg_alpha,
                    "generalized-gamma stability index in (0,1)")
        ->capture_default_str();
    cmd->add_option("--gg-tau", gg_tau, "generalized-gamma tilt, > 0")
        ->capture_default_str();
    cmd->add_option("--beta", sb_beta, "stable-beta shape, > 0")
        ->capture_default_str();
  }

  sp::CrmSpec build() const {
    if (family == "gamma") return sp::CrmSpec::gamma(theta);
    if (family == "gg") {
      return sp::CrmSpec::generalized_gamma(theta, gg_alpha, gg_tau);
    }
    return sp::CrmSpec::stable_beta(theta, sb_beta);
  }
};

// ---------------------------------------------------------------------- sketch

struct SketchArgs {
  std::string input;
  std::string out = "-";
  std::int64_t width = 1024;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void run_sketch(const SketchArgs& a) {
  std::uint64_t seed = a.seed;
  apply_env_seed(a.seed_opt, seed);
  std::vector<std::string> tokens = read_tokens(a.input);
  sp::HashFunction h = sp::new_hash(seed, a.width);
  sp::Sketch sk = sp::sketch_stream(tokens, h);
  emit(a.out, sp::sketch_to_json(sk));
  std::int64_t nonzero = 0;
  std::int64_t max_count = 0;
  for (std::int64_t c : sk.counts) {
    if (c > 0) ++nonzero;
    max_count = std::max(max_count, c);
  }
  std::cerr << "n=" << sk.total_n << " J=" << sk.width_J
            << " nonzero_buckets=" << nonzero << " max_count=" << max_count
            << "\n";
}

// -------------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string sketch_path;
  std::string prior;
  std::string mode = "exact";
  std::string queries_path;
  std::string out = "-";
  std::vector<std::int64_t> buckets;
  double theta = 1.0;
  double alpha = 0.5;
  double gamma = 1.0;
  double ci_level = 0.95;
  std::int64_t iterations = 200000;
  std::uint64_t seed = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
};

json summary_row(const sp::PosteriorPmf& pmf, double ci_level) {
  sp::PmfSummary s = sp::summarize(pmf, ci_level);
  json row;
  row["mean"] = s.mean;
  row["median"] = s.median;
  row["mode"] = s.mode;
  row["ci_lower"] = s.ci_lower;
  row["ci_upper"] = s.ci_upper;
  row["ci_level"] = s.ci_level;
  row["method"] = pmf.method_tag;
  return row;
}

void run_estimate(const EstimateArgs& a) {
  std::uint64_t seed = a.seed;
  apply_env_seed(a.seed_opt, seed);
  if (a.prior == "dp" && a.mode_opt->count() > 0) {
    throw sp::DomainError(
        "--mode applies to the two-parameter prior only (--prior pyp)");
  }
  sp::Sketch sk = sp::sketch_from_json(sp::read_text_file(a.sketch_path));
  sp::HashFunction h = sp::new_hash(sk.hash_seed, sk.width_J);

  struct Query {
    std::optional<std::string> token;
    std::int64_t bucket;
  };
  std::vector<Query> queries;
  for (std::int64_t b : a.buckets) {
    if (b < 0 || b >= sk.width_J) {
      throw sp::DomainError("bucket index out of range [0, J)");
    }
    queries.push_back({std::nullopt, b});
  }
  if (!a.queries_path.empty()) {
    for (std::string& tok : read_tokens(a.queries_path)) {
      std::int64_t b = sp::hash_key(h, tok);
      queries.push_back({std::move(tok), b});
    }
  }
  if (queries.empty()) {
    throw sp::DomainError("no queries: pass --bucket and/or --queries");
  }

  sp::PypParams pyp{a.alpha, a.gamma};
  if (a.prior == "pyp") pyp.validate();

  std::ostringstream rows;
  for (const Query& q : queries) {
    const std::int64_t c = sk.counts[std::size_t(q.bucket)];
    json row;
    if (q.token.has_value()) row["query"] = *q.token;
    row["bucket"] = q.bucket;
    row["c_j"] = c;
    if (a.prior == "dp") {
      sp::PosteriorPmf pmf = sp::dp_freq_posterior(c, a.theta, sk.width_J);
      row.update(summary_row(pmf, a.ci_level));
    } else if (a.mode == "exact") {
      try {
        sp::PosteriorPmf pmf = sp::pyp_freq_posterior_exact(sk, q.bucket, pyp);
        row.update(summary_row(pmf, a.ci_level));
      } catch (const sp::GateError& e) {
        throw sp::GateError(std::string(e.what()) +
                            " (rerun with --mode mc for this sketch)");
      }
    } else if (a.mode == "mc") {
      sp::McOptions opts;
      opts.iterations = a.iterations;
      opts.seed = seed;
      sp::PosteriorPmf pmf = sp::pyp_freq_posterior_mc(sk, q.bucket, pyp, opts);
      row.update(summary_row(pmf, a.ci_level));
    } else {  // asymptotic
      row["mean"] = sp::pyp_mean_asymptotic(c, pyp, sk.width_J);
      row["median"] = nullptr;
      row["mode"] = nullptr;
      row["ci_lower"] = nullptr;
      row["ci_upper"] = nullptr;
      row["method"] = "PYP-asymptotic";
    }
    rows << row.dump() << "\n";
  }
  emit(a.out, rows.str());
}

// ----------------------------------------------------------------- cardinality

struct CardinalityArgs {
  std::string sketch_path;
  std::string prior;
  std::string mode = "exact";
  std::string out = "-";
  double theta = 1.0;
  double alpha = 0.5;
  double gamma = 1.0;
  std::int64_t iterations = 200000;
  std::uint64_t seed = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
};

void run_cardinality(const CardinalityArgs& a) {
  std::uint64_t seed = a.seed;
  apply_env_seed(a.seed_opt, seed);
  if (a.prior == "dp" && a.mode_opt->count() > 0) {
    throw sp::DomainError(
        "--mode applies to the two-parameter prior only (--prior pyp)");
  }
  sp::Sketch sk = sp::sketch_from_json(sp::read_text_file(a.sketch_path));
  sp::CardinalityEstimate est;
  std::map<std::string, double> params;
  if (a.prior == "dp") {
    est = sp::dp_cardinality(sk, a.theta);
    params["theta"] = a.theta;
  } else {
    sp::PypParams pyp{a.alpha, a.gamma};
    pyp.validate();
    sp::McOptions opts;
    opts.iterations = a.iterations;
    opts.seed = seed;
    auto method = a.mode == "mc" ? sp::CardinalityMethod::kMc
                                 : sp::CardinalityMethod::kExactTiny;
    try {
      est = sp::pyp_cardinality(sk, pyp, method, opts);
    } catch (const sp::GateError& e) {
      throw sp::GateError(std::string(e.what()) +
                          " (rerun with --mode mc for this sketch)");
    }
    params["alpha"] = pyp.alpha;
    params["gamma"] = pyp.gamma;
  }
  emit(a.out, sp::cardinality_to_json(est, params));
}

// ---------------------------------------------------------------------- traits

struct TraitsArgs {
  std::string model = "poisson";
  std::string engine = "closed";
  std::string out = "-";
  std::int64_t c = 0;
  std::int64_t b = 1;
  std::int64_t a = 1;
  std::int64_t n = 1;
  std::int64_t width = 1;
  double lambda_rate = 1.0;
  double ci_level = 0.95;
  bool tv_bound = false;
  CrmFlags crm;
};

void run_traits(const TraitsArgs& a) {
  sp::CrmSpec spec = a.crm.build();
  if (a.model == "bernoulli") {
    if (a.tv_bound) {
      json j;
      j["tv_bound"] = sp::bernoulli_tv_bound(spec, a.width);
      j["J"] = a.width;
      emit(a.out, j.dump());
      return;
    }
    sp::PosteriorPmf pmf =
        sp::bernoulli_approx_posterior(a.c, a.b, a.n, spec, a.width);
    emit(a.out, sp::pmf_to_json(pmf, a.ci_level));
    return;
  }
  if (a.tv_bound) {
    throw sp::DomainError("--tv-bound applies to --model bernoulli only");
  }
  sp::TraitQuery q{a.c, a.b, a.a, a.n};
  sp::IbpPoissonParams params;
  params.theta = a.crm.theta;
  params.lambda_rate = a.lambda_rate;
  params.crm = spec;
  sp::PosteriorPmf pmf;
  if (a.engine == "general") {
    pmf = sp::poisson_general_posterior(q, params, a.width);
  } else if (a.crm.family == "gamma") {
    pmf = sp::poisson_gamma_posterior(q, a.crm.theta, a.width);
  } else if (a.crm.family == "gg") {
    pmf = sp::poisson_gg_posterior(q, params, a.width);
  } else {
    pmf = sp::poisson_general_posterior(q, params, a.width);
  }
  emit(a.out, sp::pmf_to_json(pmf, a.ci_level));
}

// ------------------------------------------------------------------------- fit

struct FitArgs {
  std::string model;
  std::string sketch_path;
  std::string input;
  std::string out = "-";
  std::int64_t width = 1024;
  std::int64_t prefix = 10000;
  std::int64_t rows = 0;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void run_fit(const FitArgs& a) {
  std::uint64_t seed = a.seed;
  apply_env_seed(a.seed_opt, seed);
  sp::FitReport report;
  if (a.model == "dp") {
    if (a.sketch_path.empty()) throw sp::DomainError("fit dp needs --sketch");
    sp::Sketch sk = sp::sketch_from_json(sp::read_text_file(a.sketch_path));
    report = sp::fit_dp_theta(sk);
  } else if (a.model == "pyp") {
    if (a.input.empty()) throw sp::DomainError("fit pyp needs --input tokens");
    std::vector<std::string> tokens = read_tokens(a.input);
    if (std::int64_t(tokens.size()) > a.prefix) {
      tokens.resize(std::size_t(a.prefix));
    }
    sp::HashFunction h = sp::new_hash(seed, a.width);
    report = sp::fit_pyp_prefix(tokens, h);
  } else {  // ibp
    if (a.sketch_path.empty()) throw sp::DomainError("fit ibp needs --sketch");
    if (a.rows < 1) throw sp::DomainError("fit ibp needs --rows >= 1");
    sp::Sketch sk = sp::sketch_from_json(sp::read_text_file(a.sketch_path));
    report = sp::fit_ibp_poisson_gamma(sk, a.rows);
  }
  emit(a.out, sp::fit_report_to_json(report));
  if (report.boundary_hit) {
    std::cerr << "warning: optimum at the search boundary; the fit is not an "
                 "interior maximum\n";
  }
}

// -------------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model;
  std::string out = "-";
  std::string truth_out;
  std::int64_t n = 1000;
  double alpha = 0.0;
  double gamma = 1.0;
  double exponent = 1.3;
  std::int64_t cap = 0;
  double lambda_rate = 1.0;
  std::int64_t truncation = 10000;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  CrmFlags crm;
};

void write_truth_csv(const std::string& path,
                     const std::vector<std::int64_t>& labels) {
  std::map<std::int64_t, std::int64_t> freq;
  for (std::int64_t x : labels) ++freq[x];
  std::string csv = "token,count\n";
  for (const auto& [tok, cnt] : freq) {
    csv += std::to_string(tok);
    csv += ',';
    csv += std::to_string(cnt);
    csv += '\n';
  }
  sp::write_text_file(path, csv);
}

void run_simulate(const SimulateArgs& a) {
  std::uint64_t seed = a.seed;
  apply_env_seed(a.seed_opt, seed);
  if (a.model == "crp") {
    std::vector<std::int64_t> labels;
    if (a.alpha == 0.0) {
      labels = sp::sample_pyp_sequence(sp::DpParams{a.gamma}, a.n, seed);
    } else {
      labels =
          sp::sample_pyp_sequence(sp::PypParams{a.alpha, a.gamma}, a.n, seed);
    }
    std::string text;
    for (std::int64_t x : labels) {
      text += std::to_string(x);
      text += '\n';
    }
    emit(a.out, text);
    if (!a.truth_out.empty()) write_truth_csv(a.truth_out, labels);
  } else if (a.model == "zipf") {
    std::vector<std::int64_t> items =
        sp::sample_zipf(a.exponent, a.n, a.cap, seed);
    std::string text;
    for (std::int64_t x : items) {
      text += std::to_string(x);
      text += '\n';
    }
    emit(a.out, text);
    if (!a.truth_out.empty()) write_truth_csv(a.truth_out, items);
  } else {  // ibp
    sp::CrmSpec spec = a.crm.build();
    sp::IbpSample sample = sp::sample_ibp_poisson_gamma(
        a.crm.theta, a.lambda_rate, spec, a.n, a.truncation, seed);
    json j;
    json rows = json::array();
    for (const auto& row : sample.rows) {
      json obj = json::object();
      for (const auto& [trait, level] : row) {
        obj[std::to_string(trait)] = level;
      }
      rows.push_back(obj);
    }
    j["rows"] = rows;
    j["jumps"] = sample.jumps;
    j["truncated_mass"] = sample.truncated_mass;
    j["truncation_warning"] = sample.truncation_warning;
    emit(a.out, j.dump());
    if (sample.truncation_warning) {
      std::cerr << "warning: truncation budget exhausted with expected "
                   "residual mass "
                << sample.truncated_mass << "\n";
    }
  }
}

// -------------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string input;
  std::string estimator = "dp";
  std::string out_csv = "-";
  std::string out_json;
  std::string dump_path;
  std::vector<std::int64_t> widths;
  std::vector<std::uint64_t> seeds;
  bool fit = false;
  double theta = 1.0;
  double alpha = 0.5;
  double gamma = 1.0;
  std::int64_t prefix = 10000;
};

void run_evaluate(const EvaluateArgs& a) {
  std::vector<std::string> tokens = read_tokens(a.input);
  sp::EvalOptions opts;
  opts.widths = a.widths;
  opts.seeds = a.seeds;
  if (a.estimator == "cms") {
    opts.estimator = sp::EvalEstimator::kCmsBaseline;
  } else if (a.estimator == "dp") {
    opts.estimator = sp::EvalEstimator::kDp;
  } else {
    opts.estimator = sp::EvalEstimator::kPyp;
  }
  opts.fit = a.fit;
  opts.theta = a.theta;
  opts.pyp = sp::PypParams{a.alpha, a.gamma};
  opts.fit_prefix_tokens = a.prefix;

  std::ofstream dump;
  sp::PerSymbolSink sink;
  if (!a.dump_path.empty()) {
    dump.open(a.dump_path, std::ios::trunc);
    if (!dump) throw sp::IoError("cannot open for writing: " + a.dump_path);
    // Round-trip precision so the report is exactly recomputable from the dump.
    dump.precision(std::numeric_limits<double>::max_digits10);
    dump << "J,seed,symbol,true_freq,bucket,bucket_count,estimate\n";
    sink = [&dump](std::int64_t J, std::uint64_t s, std::string_view sym,
                   std::int64_t f, std::int64_t b, std::int64_t c,
                   double est) {
      dump << J << ',' << s << ',' << sym << ',' << f << ',' << b << ',' << c
           << ',' << est << '\n';
    };
  }

  std::vector<sp::EvalReport> reports = sp::evaluate_corpus(tokens, opts, sink);
  if (dump.is_open()) {
    dump.flush();
    if (!dump) throw sp::IoError("write failure: " + a.dump_path);
  }
  emit(a.out_csv, sp::eval_reports_to_csv(reports));
  if (!a.out_json.empty()) {
    sp::write_text_file(a.out_json, sp::eval_reports_to_json(reports));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Posterior frequency, cardinality, and trait recovery from "
      "single-hash bucketed count sketches"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value configuration file (TOML-like; [subcommand] "
                 "sections; flags override)");

  // sketch ------------------------------------------------------------------
  SketchArgs sketch_args;
  CLI::App* c_sketch =
      app.add_subcommand("sketch", "Hash a token stream into bucketed counts");
  c_sketch->add_option("--input,-i", sketch_args.input,
                       "token file, whitespace-delimited ('-' for stdin)")
      ->required();
  c_sketch->add_option("--width,-J", sketch_args.width, "number of buckets J")
      ->capture_default_str();
  sketch_args.seed_opt =
      c_sketch->add_option("--seed", sketch_args.seed, "hash seed");
  c_sketch->add_option("--out,-o", sketch_args.out,
                       "sketch JSON path ('-' for stdout)");
  c_sketch->callback([&sketch_args] { run_sketch(sketch_args); });

  // estimate ----------------------------------------------------------------
  EstimateArgs est_args;
  CLI::App* c_est = app.add_subcommand(
      "estimate", "Posterior frequency for query buckets or tokens");
  c_est->add_option("--sketch", est_args.sketch_path, "sketch JSON path")
      ->required();
  c_est->add_option("--prior", est_args.prior, "dp | pyp")
      ->check(CLI::IsMember({"dp", "pyp"}))
      ->required();
  est_args.mode_opt =
      c_est->add_option("--mode", est_args.mode,
                        "pyp evaluation: exact | mc | asymptotic")
          ->check(CLI::IsMember({"exact", "mc", "asymptotic"}));
  c_est->add_option("--bucket", est_args.buckets,
                    "bucket index to query (repeatable)");
  c_est->add_option("--queries", est_args.queries_path,
                    "token file; each token is hashed and queried");
  c_est->add_option("--theta", est_args.theta, "Dirichlet concentration")
      ->capture_default_str();
  c_est->add_option("--alpha", est_args.alpha, "stability index in (0,1)")
      ->capture_default_str();
  c_est->add_option("--gamma", est_args.gamma, "strength parameter > -alpha")
      ->capture_default_str();
  c_est->add_option("--iterations", est_args.iterations,
                    "Monte Carlo iterations")
      ->capture_default_str();
  est_args.seed_opt =
      c_est->add_option("--seed", est_args.seed, "Monte Carlo seed");
  c_est->add_option("--ci", est_args.ci_level, "credible-interval level")
      ->capture_default_str();
  c_est->add_option("--out,-o", est_args.out,
                    "output path for JSON rows ('-' for stdout)");
  c_est->callback([&est_args] { run_estimate(est_args); });

  // cardinality ---------------------------------------------------------------
  CardinalityArgs card_args;
  CLI::App* c_card = app.add_subcommand(
      "cardinality", "Recover the distinct-count profile from a sketch");
  c_card->add_option("--sketch", card_args.sketch_path, "sketch JSON path")
      ->required();
  c_card->add_option("--prior", card_args.prior, "dp | pyp")
      ->check(CLI::IsMember({"dp", "pyp"}))
      ->required();
  card_args.mode_opt = c_card
                           ->add_option("--mode", card_args.mode,
                                        "pyp evaluation: exact | mc")
                           ->check(CLI::IsMember({"exact", "mc"}));
  c_card->add_option("--theta", card_args.theta, "Dirichlet concentration")
      ->capture_default_str();
  c_card->add_option("--alpha", card_args.alpha, "stability index in (0,1)")
      ->capture_default_str();
  c_card->add_option("--gamma", card_args.gamma, "strength parameter")
      ->capture_default_str();
  c_card->add_option("--iterations", card_args.iterations,
                     "Monte Carlo iterations")
      ->capture_default_str();
  card_args.seed_opt =
      c_card->add_option("--seed", card_args.seed, "Monte Carlo seed");
  c_card->add_option("--out,-o", card_args.out, "output path");
  c_card->callback([&card_args] { run_cardinality(card_args); });

  // traits --------------------------------------------------------------------
  TraitsArgs traits_args;
  CLI::App* c_traits = app.add_subcommand(
      "traits", "Posterior trait level in a bucket under the trait model");
  c_traits->add_option("--c", traits_args.c, "bucket total over previous rows")
      ->required();
  c_traits->add_option("--b", traits_args.b, "query row's bucket total")
      ->capture_default_str();
  c_traits->add_option("--a", traits_args.a, "queried trait's share of b")
      ->capture_default_str();
  c_traits->add_option("--n", traits_args.n, "number of previous rows")
      ->required();
  c_traits->add_option("--width,-J", traits_args.width, "number of buckets J")
      ->capture_default_str();
  c_traits->add_option("--model", traits_args.model, "poisson | bernoulli")
      ->check(CLI::IsMember({"poisson", "bernoulli"}))
      ->capture_default_str();
  c_traits->add_option("--engine", traits_args.engine,
                       "closed (family-specific) | general (recurrence)")
      ->check(CLI::IsMember({"closed", "general"}))
      ->capture_default_str();
  c_traits->add_option("--lambda", traits_args.lambda_rate, "mark rate scale")
      ->capture_default_str();
  c_traits->add_flag("--tv-bound", traits_args.tv_bound,
                     "print the binary-model approximation's TV error bound");
  c_traits->add_option("--ci", traits_args.ci_level, "credible-interval level")
      ->capture_default_str();
  c_traits->add_option("--out,-o", traits_args.out, "output path");
  traits_args.crm.attach(c_traits);
  c_traits->callback([&traits_args] { run_traits(traits_args); });

  // fit -----------------------------------------------------------------------
  FitArgs fit_args;
  CLI::App* c_fit = app.add_subcommand(
      "fit", "Fit prior parameters from a sketch or token prefix");
  c_fit->add_option("--model", fit_args.model, "dp | pyp | ibp")
      ->check(CLI::IsMember({"dp", "pyp", "ibp"}))
      ->required();
  c_fit->add_option("--sketch", fit_args.sketch_path,
                    "sketch JSON path (dp, ibp)");
  c_fit->add_option("--input", fit_args.input, "token file (pyp prefix fit)");
  c_fit->add_option("--width,-J", fit_args.width, "hash width for pyp fit")
      ->capture_default_str();
  c_fit->add_option("--prefix", fit_args.prefix,
                    "number of prefix tokens used by the pyp fit")
      ->capture_default_str();
  c_fit->add_option("--rows", fit_args.rows, "number of rows n (ibp)");
  fit_args.seed_opt =
      c_fit->add_option("--seed", fit_args.seed, "hash seed for pyp fit");
  c_fit->add_option("--out,-o", fit_args.out, "output path");
  c_fit->callback([&fit_args] { run_fit(fit_args); });

  // simulate --------------------------------------------------------------------
  SimulateArgs sim_args;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Generate synthetic corpora and trait matrices");
  c_sim->add_option("--model", sim_args.model, "crp | zipf | ibp")
      ->check(CLI::IsMember({"crp", "zipf", "ibp"}))
      ->required();
  c_sim->add_option("--n", sim_args.n, "number of draws / rows")
      ->capture_default_str();
  c_sim->add_option("--alpha", sim_args.alpha,
                    "crp stability index in [0,1); 0 is the one-parameter urn")
      ->capture_default_str();
  c_sim->add_option("--gamma", sim_args.gamma, "crp strength parameter")
      ->capture_default_str();
  c_sim->add_option("--exponent", sim_args.exponent, "power-law exponent > 1")
      ->capture_default_str();
  c_sim->add_option("--cap", sim_args.cap,
                    "power-law item cap (0 = default 1e7)")
      ->capture_default_str();
  c_sim->add_option("--lambda", sim_args.lambda_rate, "ibp mark rate scale")
      ->capture_default_str();
  c_sim->add_option("--truncation", sim_args.truncation,
                    "ibp atom budget (>= 100)")
      ->capture_default_str();
  sim_args.seed_opt = c_sim->add_option("--seed", sim_args.seed, "RNG seed");
  c_sim->add_option("--out,-o", sim_args.out,
                    "tokens (crp, zipf) or sample JSON (ibp)");
  c_sim->add_option("--truth-out", sim_args.truth_out,
                    "ground-truth frequency CSV (crp, zipf)");
  sim_args.crm.attach(c_sim);
  c_sim->callback([&sim_args] { run_simulate(sim_args); });

  // evaluate --------------------------------------------------------------------
  EvaluateArgs eval_args;
  CLI::App* c_eval = app.add_subcommand(
      "evaluate",
      "Stratified mean-absolute-error report over widths and seeds");
  c_eval->add_option("--input", eval_args.input, "corpus token file")
      ->required();
  c_eval->add_option("--widths", eval_args.widths, "sketch widths J")
      ->delimiter(',')
      ->required();
  c_eval->add_option("--seeds", eval_args.seeds, "hash seeds")
      ->delimiter(',')
      ->required();
  c_eval->add_option("--estimator", eval_args.estimator, "cms | dp | pyp")
      ->check(CLI::IsMember({"cms", "dp", "pyp"}))
      ->capture_default_str();
  c_eval->add_flag("--fit", eval_args.fit,
                   "fit the prior per (J, seed) instead of fixing it");
  c_eval->add_option("--theta", eval_args.theta, "fixed Dirichlet theta")
      ->capture_default_str();
  c_eval->add_option("--alpha", eval_args.alpha, "fixed stability index")
      ->capture_default_str();
  c_eval->add_option("--gamma", eval_args.gamma, "fixed strength parameter")
      ->capture_default_str();
  c_eval->add_option("--prefix", eval_args.prefix,
                     "prefix tokens for the pyp fit")
      ->capture_default_str();
  c_eval->add_option("--out-csv", eval_args.out_csv,
                     "report CSV path ('-' for stdout)");
  c_eval->add_option("--out-json", eval_args.out_json, "report JSON path");
  c_eval->add_option("--dump", eval_args.dump_path,
                     "per-symbol estimate dump CSV path");
  c_eval->callback([&eval_args] { run_evaluate(eval_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const sp::DomainError& e) {  // covers PoleError
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sp::GateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sp::DegenerateMcError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sp::AccuracyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
