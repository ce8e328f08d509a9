#pragma once

#include <map>
#include <string>

#include "sketchpost/cardinality.hpp"
#include "sketchpost/fitting.hpp"
#include "sketchpost/hashing.hpp"
#include "sketchpost/species.hpp"

namespace sketchpost {

// Sketch <-> JSON object {"J": int, "n": int, "seed": int, "counts": [int]}.
// Round-trips bit-exactly.  Throws IoError on malformed or inconsistent input
// (wrong types, counts not summing to n, counts.size() != J).
std::string sketch_to_json(const Sketch& sk);
Sketch sketch_from_json(const std::string& text);

// Sketch <-> CSV: one count per line.  A leading "# seed=<u64>" comment line
// carries the hash seed so the export round-trips bit-exactly; comment lines
// and blank lines are ignored on read.  J is the number of data lines and n
// the column sum.
std::string sketch_to_csv(const Sketch& sk);
Sketch sketch_from_csv(const std::string& text);

// PosteriorPmf -> JSON {"support_max": int, "probs": [...],
// "stderr": [...]|null, "method": str, "summaries": {...}} where summaries
// holds mean/median/mode and the credible interval at ci_level.
std::string pmf_to_json(const PosteriorPmf& pmf, double ci_level = 0.95);

// CardinalityEstimate -> JSON {"k_hat": real, "m_hat": {"1": ..., ...},
// <one entry per prior parameter>, "method": str}.  Pass the prior's
// parameters (e.g. {{"theta", 2.0}} or {{"alpha", .5}, {"gamma", 1.0}}) so
// the report is self-describing.
std::string cardinality_to_json(const CardinalityEstimate& est,
                                const std::map<std::string, double>& params);

// FitReport -> JSON with the full objective trace for audit.
std::string fit_report_to_json(const FitReport& report);

// Whole-file text helpers; both throw IoError with the path in the message.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sketchpost
