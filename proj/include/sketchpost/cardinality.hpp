#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sketchpost/hashing.hpp"
#include "sketchpost/species.hpp"

namespace sketchpost {

// Posterior expectations of the number of distinct values: m_hat[l-1] is the
// expected number of values occurring exactly l times among the n hashed
// observations (l = 1..L_max), and k_hat is their total.
struct CardinalityEstimate {
  double k_hat = 0.0;
  std::vector<double> m_hat;  // size L_max; entry [l-1] is for frequency l
  std::int64_t L_max = 0;
  std::string method_tag;
  std::optional<double> k_hat_stderr;              // Monte Carlo only
  std::optional<std::vector<double>> m_hat_stderrs;  // Monte Carlo only

  double m_at(std::int64_t l) const;  // 0 outside 1..L_max
};

// Bucket-marginal law of the frequency of one extra observation under the
// Dirichlet species model: Pr[f = l | counts], l = 0..max_j c_j.
PosteriorPmf dp_unconditional_freq(const Sketch& sk, double theta);

// Occupancy recovery under the Dirichlet model (exact, linear in n).
CardinalityEstimate dp_cardinality(const Sketch& sk, double theta);

// Same total by the digamma identity
//   k_hat = (theta/J) sum_j [psi(theta/J + c_j) - psi(theta/J)],
// kept as an independent evaluation path for cross-checks.
double dp_cardinality_closed_form(const Sketch& sk, double theta);

// Bucket-marginal law of the extra observation's frequency under the
// two-parameter model (exact, gated like the exact posterior).
PosteriorPmf pyp_unconditional_freq(const Sketch& sk, const PypParams& params);

enum class CardinalityMethod { kExactTiny, kMc };

// Occupancy recovery under the two-parameter model.  kExactTiny enumerates
// the factorial-coefficient sums under the prod_k (c_k + 2) <= 1e7 gate;
// kMc uses the importance-sampling representation and fills the stderr
// fields.
CardinalityEstimate pyp_cardinality(const Sketch& sk, const PypParams& params,
                                    CardinalityMethod method,
                                    const McOptions& opts = {});

}  // namespace sketchpost
