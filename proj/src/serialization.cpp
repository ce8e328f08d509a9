#include "sketchpost/serialization.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketchpost/errors.hpp"

namespace sketchpost {

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text, const char* what) {
  json j = json::parse(text, /*cb=*/nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw IoError(std::string("malformed JSON for ") + what);
  }
  return j;
}

void check_sketch(const Sketch& sk, const char* what) {
  if (sk.width_J < 1 || std::int64_t(sk.counts.size()) != sk.width_J) {
    throw IoError(std::string(what) + ": counts length disagrees with J");
  }
  std::int64_t sum = 0;
  for (std::int64_t c : sk.counts) {
    if (c < 0) throw IoError(std::string(what) + ": negative count");
    sum += c;
  }
  if (sum != sk.total_n) {
    throw IoError(std::string(what) + ": counts do not sum to n");
  }
}

}  // namespace

std::string sketch_to_json(const Sketch& sk) {
  json j;
  j["J"] = sk.width_J;
  j["n"] = sk.total_n;
  j["seed"] = sk.hash_seed;
  j["counts"] = sk.counts;
  return j.dump();
}

Sketch sketch_from_json(const std::string& text) {
  json j = parse_or_throw(text, "sketch");
  if (!j.is_object() || !j.contains("J") || !j.contains("n") ||
      !j.contains("seed") || !j.contains("counts") ||
      !j["counts"].is_array()) {
    throw IoError("sketch JSON must be {\"J\", \"n\", \"seed\", \"counts\"}");
  }
  Sketch sk;
  try {
    sk.width_J = j["J"].get<std::int64_t>();
    sk.total_n = j["n"].get<std::int64_t>();
    sk.hash_seed = j["seed"].get<std::uint64_t>();
    sk.counts = j["counts"].get<std::vector<std::int64_t>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("sketch JSON field has wrong type: ") +
                  e.what());
  }
  check_sketch(sk, "sketch JSON");
  return sk;
}

std::string sketch_to_csv(const Sketch& sk) {
  std::ostringstream out;
  out << "# seed=" << sk.hash_seed << "\n";
  for (std::int64_t c : sk.counts) out << c << "\n";
  return out.str();
}

Sketch sketch_from_csv(const std::string& text) {
  Sketch sk;
  std::istringstream in(text);
  std::string line;
  bool seed_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "seed=";
      auto pos = line.find(key);
      if (pos != std::string::npos) {
        try {
          sk.hash_seed = std::stoull(line.substr(pos + key.size()));
          seed_seen = true;
        } catch (const std::exception&) {
          throw IoError("sketch CSV: unreadable seed comment");
        }
      }
      continue;
    }
    try {
      std::size_t used = 0;
      std::int64_t c = std::stoll(line, &used);
      if (used != line.size()) throw IoError("");
      sk.counts.push_back(c);
    } catch (const std::exception&) {
      throw IoError("sketch CSV: non-integer count line: " + line);
    }
  }
  if (sk.counts.empty()) throw IoError("sketch CSV: no count lines");
  if (!seed_seen) sk.hash_seed = 0;
  sk.width_J = std::int64_t(sk.counts.size());
  sk.total_n = 0;
  for (std::int64_t c : sk.counts) sk.total_n += c;
  check_sketch(sk, "sketch CSV");
  return sk;
}

std::string pmf_to_json(const PosteriorPmf& pmf, double ci_level) {
  json j;
  j["support_max"] = pmf.support_max();
  std::vector<double> probs(pmf.log_probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = std::exp(pmf.log_probs[i]);
  }
  j["probs"] = probs;
  if (pmf.stderrs.has_value()) {
    j["stderr"] = *pmf.stderrs;
  } else {
    j["stderr"] = nullptr;
  }
  j["method"] = pmf.method_tag;
  PmfSummary s = summarize(pmf, ci_level);
  j["summaries"] = {{"mean", s.mean},        {"median", s.median},
                    {"mode", s.mode},        {"ci_lower", s.ci_lower},
                    {"ci_upper", s.ci_upper}, {"ci_level", s.ci_level}};
  return j.dump();
}

std::string cardinality_to_json(const CardinalityEstimate& est,
                                const std::map<std::string, double>& params) {
  json j;
  j["k_hat"] = est.k_hat;
  json m = json::object();
  for (std::int64_t l = 1; l <= est.L_max; ++l) {
    m[std::to_string(l)] = est.m_hat[std::size_t(l - 1)];
  }
  j["m_hat"] = m;
  for (const auto& [name, value] : params) j[name] = value;
  j["method"] = est.method_tag;
  if (est.k_hat_stderr.has_value()) j["k_hat_stderr"] = *est.k_hat_stderr;
  return j.dump();
}

std::string fit_report_to_json(const FitReport& report) {
  json j;
  j["params_hat"] = report.params_hat;
  j["converged"] = report.converged;
  j["boundary_hit"] = report.boundary_hit;
  if (report.n_prefix > 0) j["n_prefix"] = report.n_prefix;
  json trace = json::array();
  for (const FitTracePoint& p : report.objective_trace) {
    trace.push_back({{"params", p.params}, {"objective", p.objective}});
  }
  j["trace"] = trace;
  return j.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace sketchpost
