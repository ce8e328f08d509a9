#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "sketchpost/rng.hpp"
#include "sketchpost/species.hpp"
#include "sketchpost/specialfns.hpp"

namespace sketchpost {

// ---------------------------------------------------------------------------
// Exchangeable-sequence samplers
// ---------------------------------------------------------------------------

// n draws from the two-parameter urn: after i draws holding k distinct
// labels, a new label appears with probability (gamma + k alpha)/(gamma + i)
// and an existing label with current count m is repeated with probability
// (m - alpha)/(gamma + i).  Labels are dense integers 0..k-1 in order of
// first appearance.  alpha in [0, 1); alpha = 0 is the one-parameter urn.
std::vector<std::int64_t> sample_pyp_sequence(const PypParams& params,
                                              std::int64_t n,
                                              std::uint64_t seed);
std::vector<std::int64_t> sample_pyp_sequence(const DpParams& params,
                                              std::int64_t n,
                                              std::uint64_t seed);

// Power-law item sampler: item k (1-based) has probability k^{-c} / zeta(c).
// Sampling is by inverse CDF over precomputed partial sums up to `cap`
// items; the infinite tail's mass is folded onto the cap item itself, so
// every item below the cap carries its exact probability and only statistics
// that distinguish items >= cap feel the fold.  The folded mass is bounded
// by cap^{1-c} / ((c-1) zeta(c)) and is reported by tail_mass().
class ZipfSampler {
 public:
  // cap = 0 requests the unbounded default of 10^7 items.
  ZipfSampler(double exponent, std::int64_t cap);

  std::int64_t sample(CounterRng& rng) const;

  double item_prob(std::int64_t k) const;  // exact k^{-c}/zeta(c), k < cap
  double tail_mass() const { return tail_mass_; }
  std::int64_t cap() const { return std::int64_t(cumulative_.size()); }

 private:
  double exponent_;
  double zeta_;
  double tail_mass_;
  std::vector<double> cumulative_;
};

// n draws from the sampler above with a fresh deterministic stream.
std::vector<std::int64_t> sample_zipf(double exponent, std::int64_t n,
                                      std::int64_t cap, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Truncated-measure trait sampler
// ---------------------------------------------------------------------------

struct IbpSample {
  // rows[i] maps trait index -> level for row i (absent means level 0).
  std::vector<std::map<std::int64_t, std::int64_t>> rows;
  // Atom sizes in decreasing order; trait index k refers to jumps[k].
  std::vector<double> jumps;
  // Expected measure mass beyond the last generated atom (quality metric:
  // marks lost to the truncation are Poisson with mean n*lambda*this).
  double truncated_mass = 0.0;
  // True when the truncation budget was exhausted before the remaining mass
  // fell below the negligibility threshold.
  bool truncation_warning = false;
};

// Draws one realization of the trait model: the measure's atoms are generated
// largest-first by inverse-Levy sampling (unit-rate arrival times mapped
// through the inverse tail mass), then each of the n rows marks each atom s
// with a Poisson(lambda * s) level -- or a Bernoulli(s) level for a
// stable-beta measure, whose atoms lie in (0, 1).  Atom generation stops
// early once the expected number of remaining marks drops below 1e-9, and
// always at `truncation` atoms; truncation >= 100 is required.
IbpSample sample_ibp_poisson_gamma(double theta, double lambda_rate,
                                   const CrmSpec& spec, std::int64_t n,
                                   std::int64_t truncation,
                                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// Exact partition-enumeration oracles
// ---------------------------------------------------------------------------

// Exact joint law of (bucket counts over the first n draws, the next draw's
// bucket, the next draw's frequency among the first n), computed by
// enumerating all set partitions of n+1 exchangeable draws weighted by the
// two-parameter partition law, with each block placed independently and
// uniformly across J buckets (idealized hashing).  Gates: n <= 7, J <= 3.
class PartitionOracleResult {
 public:
  using Key = std::tuple<std::vector<std::int64_t>, std::int64_t, std::int64_t>;

  PartitionOracleResult(std::int64_t n, std::int64_t J, double alpha,
                        double gamma)
      : n_(n), J_(J), alpha_(alpha), gamma_(gamma) {}

  std::int64_t n() const { return n_; }
  std::int64_t width_J() const { return J_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }

  const std::map<Key, double>& joint_table() const { return joint_; }
  double total_mass() const;

  // Pr[counts over the first n draws] (marginal over bucket and frequency).
  double sketch_marginal(const std::vector<std::int64_t>& counts) const;

  // Conditional law of the next draw's frequency given counts and its
  // bucket; entries l = 0..c_j.  Throws DomainError if the cell has zero
  // probability.
  std::vector<double> conditional_freq(const std::vector<std::int64_t>& counts,
                                       std::int64_t j) const;

  void add_mass(const Key& key, double prob) { joint_[key] += prob; }

 private:
  std::int64_t n_;
  std::int64_t J_;
  double alpha_;
  double gamma_;
  std::map<Key, double> joint_;
};

PartitionOracleResult partition_oracle(std::int64_t n, std::int64_t J,
                                       const PypParams& params);
PartitionOracleResult partition_oracle(std::int64_t n, std::int64_t J,
                                       const DpParams& params);

// Companion oracle for cardinality: enumerates partitions of n draws and
// tabulates, for each bucket-count vector c, the probability Pr[C = c] and
// the conditional expectations E[M_l | C = c] of the number of distinct
// symbols with frequency l (l = 1..n).  Same gates as above.
class PartitionCardinalityOracle {
 public:
  PartitionCardinalityOracle(std::int64_t n, std::int64_t J) : n_(n), J_(J) {}

  std::int64_t n() const { return n_; }
  std::int64_t width_J() const { return J_; }

  double sketch_prob(const std::vector<std::int64_t>& counts) const;
  // E[M_l | C = counts], entries l = 1..n at indices 0..n-1.
  std::vector<double> expected_m(const std::vector<std::int64_t>& counts) const;
  double total_mass() const;

  void add_mass(const std::vector<std::int64_t>& counts, double prob,
                const std::vector<std::int64_t>& m_profile);

 private:
  std::int64_t n_;
  std::int64_t J_;
  std::map<std::vector<std::int64_t>, double> prob_;
  std::map<std::vector<std::int64_t>, std::vector<double>> m_sums_;
};

PartitionCardinalityOracle partition_oracle_cardinality(std::int64_t n,
                                                        std::int64_t J,
                                                        const PypParams& params);
PartitionCardinalityOracle partition_oracle_cardinality(std::int64_t n,
                                                        std::int64_t J,
                                                        const DpParams& params);

}  // namespace sketchpost
