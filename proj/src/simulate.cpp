#include "sketchpost/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "sketchpost/errors.hpp"
#include "sketchpost/logspace.hpp"
#include "sketchpost/quadrature.hpp"

namespace sketchpost {

namespace {

constexpr std::uint64_t kUrnStream = 0x75726e;     // "urn"
constexpr std::uint64_t kZipfStream = 0x7a697066;  // "zipf"
constexpr std::uint64_t kTraitStream = 0x696270;   // "ibp"
constexpr double kEulerGamma = 0.57721566490153286;

// ---------------------------------------------------------------------------
// Two-parameter urn
// ---------------------------------------------------------------------------

// Existing-block selection uses occurrence copying with rejection: a uniform
// past occurrence lands on block b with chance n_b / i, and accepting with
// chance (n_b - alpha) / n_b leaves per-trial mass (n_b - alpha) / i, so the
// accepted block has exactly the discounted law.  Expected trials are below
// 1 / (1 - alpha), keeping each draw O(1).
std::vector<std::int64_t> run_urn(double alpha, double gamma, std::int64_t n,
                                  std::uint64_t seed) {
  if (n < 1) throw DomainError("sequence length must be >= 1");
  CounterRng rng = CounterRng::from_seed(seed, kUrnStream);
  std::vector<std::int64_t> labels;
  labels.reserve(std::size_t(n));
  std::vector<std::int64_t> counts;
  for (std::int64_t i = 0; i < n; ++i) {
    const double p_new =
        (gamma + double(counts.size()) * alpha) / (gamma + double(i));
    if (rng.next_unit() < p_new) {
      labels.push_back(std::int64_t(counts.size()));
      counts.push_back(1);
      continue;
    }
    std::int64_t pick = 0;
    while (true) {
      pick = labels[std::size_t(rng.next_below(std::uint64_t(i)))];
      if (alpha == 0.0) break;
      const double m = double(counts[std::size_t(pick)]);
      if (rng.next_unit() * m < m - alpha) break;
    }
    labels.push_back(pick);
    counts[std::size_t(pick)] += 1;
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Inverse tail-mass solvers for the trait sampler
// ---------------------------------------------------------------------------

// Solves E1(x) = y for x > 0.  Beyond y = 11.43 the solution is below ~6e-6
// and the expansion E1(x) = -euler - ln x + x - x^2/4 + O(x^3) inverts by a
// contraction; otherwise a bracketed Newton iteration in log x.
double expint_e1_inverse(double y) {
  if (y > 11.43) {
    double x = 0.0;
    for (int it = 0; it < 3; ++it) {
      x = std::exp(-kEulerGamma - y + x - 0.25 * x * x);
    }
    return x;
  }
  double hi = 60.0;
  while (hi < 700.0 && expint_e1(hi) > y) hi *= 2.0;
  double zlo = std::log(1e-6);
  double zhi = std::log(hi);
  double z = 0.5 * (zlo + zhi);
  for (int it = 0; it < 80; ++it) {
    const double x = std::exp(z);
    const double f = expint_e1(x) - y;  // decreasing in z
    if (f > 0.0) {
      zlo = z;
    } else {
      zhi = z;
    }
    double z_next;
    if (x < 500.0) {
      z_next = z + f * std::exp(x);  // d/dz E1(e^z) = -e^{-x}
      if (!(z_next > zlo && z_next < zhi)) z_next = 0.5 * (zlo + zhi);
    } else {
      z_next = 0.5 * (zlo + zhi);
    }
    const bool done = std::abs(z_next - z) < 1e-14 * (1.0 + std::abs(z));
    z = z_next;
    if (done) break;
  }
  return std::exp(z);
}

// Inverse tail mass for a stable-beta density with beta != 1.  In the
// substituted coordinate t = (1 - s)^beta the tail below s solves
//   N(s) = (theta / beta) * G(t),  G(t) = integral_0^t dv / (1 - v^{1/beta}),
// so one cumulative table of G inverts every arrival.  G's log pole at t = 1
// (i.e. s = 0) is resolved by geometric spacing of 1 - t.
class StableBetaInverter {
 public:
  StableBetaInverter(double beta, double theta) : beta_(beta), theta_(theta) {
    constexpr int kNodes = 512;
    t_.resize(kNodes);
    g_.resize(kNodes);
    t_[0] = 0.0;
    g_[0] = 0.0;
    const double log_floor = std::log(1e-15);
    auto integrand = [beta](double t) {
      return 1.0 / (1.0 - std::pow(t, 1.0 / beta));
    };
    for (int i = 1; i < kNodes; ++i) {
      t_[std::size_t(i)] =
          1.0 - std::exp(log_floor * double(i) / double(kNodes - 1));
      g_[std::size_t(i)] =
          g_[std::size_t(i - 1)] +
          integrate_or_throw(integrand, t_[std::size_t(i - 1)],
                             t_[std::size_t(i)], 1e-13, 1e-10);
    }
  }

  double jump(double w) const {
    const double target = w * beta_ / theta_;
    if (target >= g_.back()) {
      // Mass beyond the table corresponds to atoms below ~1e-15 / beta,
      // unreachable before the sampler's negligibility stop triggers.
      return -std::expm1(std::log(t_.back()) / beta_);
    }
    auto it = std::upper_bound(g_.begin(), g_.end(), target);
    const std::size_t i = std::size_t(it - g_.begin());  // g_[i-1] <= target < g_[i]
    const double q0 = std::log1p(-t_[i - 1]);
    const double q1 = std::log1p(-t_[i]);
    const double frac = (target - g_[i - 1]) / (g_[i] - g_[i - 1]);
    const double q = q0 + frac * (q1 - q0);
    const double t = -std::expm1(q);
    if (t <= 0.0) return 1.0;
    return -std::expm1(std::log(t) / beta_);  // s = 1 - t^{1/beta}
  }

 private:
  double beta_;
  double theta_;
  std::vector<double> t_;
  std::vector<double> g_;  // cumulative integral at t_
};

// Inverse tail mass for a generalized-gamma density, via a log-log table of
// N(x)/theta = (alpha / Gamma(1-alpha)) integral_x^inf s^{-alpha-1} e^{-tau s} ds.
class GeneralizedGammaInverter {
 public:
  GeneralizedGammaInverter(const GeneralizedGammaCrm& gg, double theta)
      : theta_(theta) {
    const double norm = std::exp(std::log(gg.alpha) - std::lgamma(1.0 - gg.alpha));
    const double tau = gg.tau;
    const double alpha = gg.alpha;
    auto density = [norm, tau, alpha](double s) {
      return norm * std::pow(s, -alpha - 1.0) * std::exp(-tau * s);
    };
    auto tail_above = [&](double x0) {
      return integrate_semi_infinite(
                 [&](double v) { return density(x0 + v); }, 1e-15, 1e-9)
          .value;
    };
    double hi = 1.0;
    double hi_tail = tail_above(hi);
    while (hi_tail > 1e-14 && hi < 1e9) {
      hi *= 2.0;
      hi_tail = tail_above(hi);
    }
    constexpr int kNodes = 768;
    x_.resize(kNodes);
    tail_.resize(kNodes);
    const double log_lo = std::log(1e-18);
    const double log_hi = std::log(hi);
    for (int i = 0; i < kNodes; ++i) {
      x_[std::size_t(i)] = std::exp(
          log_lo + (log_hi - log_lo) * double(i) / double(kNodes - 1));
    }
    tail_[kNodes - 1] = hi_tail;
    for (int i = kNodes - 2; i >= 0; --i) {
      tail_[std::size_t(i)] =
          tail_[std::size_t(i + 1)] +
          integrate_or_throw(density, x_[std::size_t(i)],
                             x_[std::size_t(i + 1)], 1e-15, 1e-10);
    }
  }

  double jump(double w) const {
    const double target = w / theta_;
    if (target >= tail_.front()) return x_.front();
    if (target <= tail_.back()) return x_.back();
    // tail_ is decreasing; find tail_[i] >= target >= tail_[i+1]
    auto it = std::lower_bound(tail_.begin(), tail_.end(), target,
                               std::greater<double>());
    std::size_t i = std::size_t(it - tail_.begin());
    if (i == 0) return x_.front();
    const double lt0 = std::log(tail_[i - 1]);
    const double lt1 = std::log(tail_[i]);
    const double frac = (std::log(target) - lt0) / (lt1 - lt0);
    return std::exp(std::log(x_[i - 1]) +
                    frac * (std::log(x_[i]) - std::log(x_[i - 1])));
  }

 private:
  double theta_;
  std::vector<double> x_;
  std::vector<double> tail_;  // N(x)/theta, decreasing
};

// theta * integral_0^x s rho(s) ds: the expected measure mass carried by
// atoms smaller than x.
double measure_mass_below(const CrmSpec& spec, double theta, double x) {
  if (std::holds_alternative<GammaCrm>(spec.family)) {
    return theta * (-std::expm1(-x));
  }
  if (const auto* gg = std::get_if<GeneralizedGammaCrm>(&spec.family)) {
    // integral_0^x s^{-alpha} e^{-tau s} ds smoothed by s = v^{1/(1-alpha)}.
    const double alpha = gg->alpha;
    const double tau = gg->tau;
    const double norm = std::exp(std::log(alpha) - std::lgamma(1.0 - alpha));
    const double power = 1.0 / (1.0 - alpha);
    const double upper = std::pow(x, 1.0 - alpha);
    const double integral = integrate_or_throw(
        [tau, power](double v) { return std::exp(-tau * std::pow(v, power)); },
        0.0, upper, 1e-14, 1e-10);
    return theta * norm * power * integral;
  }
  const auto& sb = std::get<StableBetaCrm>(spec.family);
  const double clamped = std::clamp(x, 0.0, 1.0);
  return theta * (-std::expm1(sb.beta * std::log1p(-clamped))) / sb.beta;
}

// ---------------------------------------------------------------------------
// Partition enumeration
// ---------------------------------------------------------------------------

struct PypLaw {
  double alpha;
  double gamma;
};

void check_oracle_gates(std::int64_t n, std::int64_t J) {
  if (n < 1) throw DomainError("oracle needs n >= 1");
  if (n > 7) throw GateError("partition enumeration gated at n <= 7");
  if (J < 1) throw DomainError("oracle needs J >= 1");
  if (J > 3) throw GateError("partition enumeration gated at J <= 3");
}

// Visits every set partition of m elements encoded as a restricted growth
// string: a[0] = 0 and a[i] <= 1 + max(a[0..i-1]).
template <typename Visit>
void for_each_partition(std::int64_t m, Visit&& visit) {
  std::vector<std::int64_t> a(std::size_t(m), 0);
  while (true) {
    visit(a);
    std::int64_t i = m - 1;
    for (; i >= 1; --i) {
      std::int64_t prefix_max = 0;
      for (std::int64_t t = 0; t < i; ++t) {
        prefix_max = std::max(prefix_max, a[std::size_t(t)]);
      }
      if (a[std::size_t(i)] <= prefix_max) break;
    }
    if (i < 1) return;
    a[std::size_t(i)] += 1;
    for (std::int64_t t = i + 1; t < m; ++t) a[std::size_t(t)] = 0;
  }
}

// Two-parameter exchangeable partition weight for block sizes over m draws:
//   prod_{i<k} (gamma + i alpha) * prod_b (1-alpha)_(size_b - 1) / (gamma)_(m).
double log_partition_weight(const PypLaw& law,
                            const std::vector<std::int64_t>& sizes,
                            std::int64_t m) {
  double lp = -log_rising(law.gamma, m);
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    lp += std::log(law.gamma + double(b) * law.alpha);
    lp += log_rising(1.0 - law.alpha, sizes[b] - 1);
  }
  return lp;
}

PartitionOracleResult build_freq_oracle(std::int64_t n, std::int64_t J,
                                        const PypLaw& law) {
  check_oracle_gates(n, J);
  PartitionOracleResult out(n, J, law.alpha, law.gamma);
  const std::int64_t m = n + 1;
  for_each_partition(m, [&](const std::vector<std::int64_t>& a) {
    const std::int64_t k =
        1 + *std::max_element(a.begin(), a.end());
    std::vector<std::int64_t> sizes(std::size_t(k), 0);
    for (std::int64_t v : a) sizes[std::size_t(v)] += 1;
    const double mass = std::exp(log_partition_weight(law, sizes, m)) *
                        std::pow(double(J), -double(k));
    const std::int64_t query_block = a[std::size_t(n)];
    const std::int64_t f = sizes[std::size_t(query_block)] - 1;
    std::vector<std::int64_t> bucket(std::size_t(k), 0);
    std::vector<std::int64_t> counts(std::size_t(J), 0);
    while (true) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::int64_t e = 0; e < n; ++e) {
        counts[std::size_t(bucket[std::size_t(a[std::size_t(e)])])] += 1;
      }
      out.add_mass({counts, bucket[std::size_t(query_block)], f}, mass);
      std::int64_t d = 0;
      while (d < k) {
        bucket[std::size_t(d)] += 1;
        if (bucket[std::size_t(d)] < J) break;
        bucket[std::size_t(d)] = 0;
        ++d;
      }
      if (d == k) break;
    }
  });
  return out;
}

PartitionCardinalityOracle build_cardinality_oracle(std::int64_t n,
                                                    std::int64_t J,
                                                    const PypLaw& law) {
  check_oracle_gates(n, J);
  PartitionCardinalityOracle out(n, J);
  for_each_partition(n, [&](const std::vector<std::int64_t>& a) {
    const std::int64_t k =
        1 + *std::max_element(a.begin(), a.end());
    std::vector<std::int64_t> sizes(std::size_t(k), 0);
    for (std::int64_t v : a) sizes[std::size_t(v)] += 1;
    const double mass = std::exp(log_partition_weight(law, sizes, n)) *
                        std::pow(double(J), -double(k));
    std::vector<std::int64_t> m_profile(std::size_t(n), 0);
    for (std::int64_t s : sizes) m_profile[std::size_t(s - 1)] += 1;
    std::vector<std::int64_t> bucket(std::size_t(k), 0);
    std::vector<std::int64_t> counts(std::size_t(J), 0);
    while (true) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::int64_t e = 0; e < n; ++e) {
        counts[std::size_t(bucket[std::size_t(a[std::size_t(e)])])] += 1;
      }
      out.add_mass(counts, mass, m_profile);
      std::int64_t d = 0;
      while (d < k) {
        bucket[std::size_t(d)] += 1;
        if (bucket[std::size_t(d)] < J) break;
        bucket[std::size_t(d)] = 0;
        ++d;
      }
      if (d == k) break;
    }
  });
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public samplers
// ---------------------------------------------------------------------------

std::vector<std::int64_t> sample_pyp_sequence(const PypParams& params,
                                              std::int64_t n,
                                              std::uint64_t seed) {
  // The urn itself is well defined at zero discount (the one-parameter
  // special case), so the sampler admits it even though the posterior
  // routines require a strictly positive discount.
  if (params.alpha == 0.0) {
    if (!(params.gamma > 0.0) || !std::isfinite(params.gamma)) {
      throw DomainError("total mass gamma must be positive and finite");
    }
  } else {
    params.validate();
  }
  return run_urn(params.alpha, params.gamma, n, seed);
}

std::vector<std::int64_t> sample_pyp_sequence(const DpParams& params,
                                              std::int64_t n,
                                              std::uint64_t seed) {
  params.validate();
  return run_urn(0.0, params.theta, n, seed);
}

ZipfSampler::ZipfSampler(double exponent, std::int64_t cap)
    : exponent_(exponent) {
  if (!(exponent > 1.0)) {
    throw DomainError("power-law exponent must exceed 1 (measure diverges)");
  }
  if (cap == 0) cap = 10'000'000;
  if (cap < 1) throw DomainError("item cap must be >= 1 (0 selects the default)");
  cumulative_.resize(std::size_t(cap));
  long double run = 0.0L;
  for (std::int64_t k = 1; k <= cap; ++k) {
    run += (long double)(std::pow(double(k), -exponent));
    cumulative_[std::size_t(k - 1)] = double(run);
  }
  // Euler-Maclaurin estimate of sum_{k > cap} k^{-c}, accurate to well below
  // double rounding for cap >= a few hundred.
  const double a = double(cap) + 1.0;
  const double c = exponent;
  const double tail = std::pow(a, 1.0 - c) / (c - 1.0) +
                      0.5 * std::pow(a, -c) +
                      (c / 12.0) * std::pow(a, -c - 1.0) -
                      (c * (c + 1.0) * (c + 2.0) / 720.0) *
                          std::pow(a, -c - 3.0);
  zeta_ = double(run + (long double)tail);
  tail_mass_ = tail / zeta_;
  for (double& v : cumulative_) v /= zeta_;
  cumulative_.back() = 1.0;  // the cap item absorbs the folded tail
}

std::int64_t ZipfSampler::sample(CounterRng& rng) const {
  const double u = rng.next_unit();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::int64_t(it - cumulative_.begin()) + 1;
}

double ZipfSampler::item_prob(std::int64_t k) const {
  if (k < 1) throw DomainError("items are numbered from 1");
  const std::int64_t cap_k = std::int64_t(cumulative_.size());
  if (k > cap_k) return 0.0;
  const double exact = std::pow(double(k), -exponent_) / zeta_;
  return k == cap_k ? exact + tail_mass_ : exact;
}

std::vector<std::int64_t> sample_zipf(double exponent, std::int64_t n,
                                      std::int64_t cap, std::uint64_t seed) {
  if (n < 0) throw DomainError("sample size must be >= 0");
  ZipfSampler sampler(exponent, cap);
  CounterRng rng = CounterRng::from_seed(seed, kZipfStream);
  std::vector<std::int64_t> out;
  out.reserve(std::size_t(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(sampler.sample(rng));
  return out;
}

IbpSample sample_ibp_poisson_gamma(double theta, double lambda_rate,
                                   const CrmSpec& spec, std::int64_t n,
                                   std::int64_t truncation,
                                   std::uint64_t seed) {
  spec.validate();
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("trait mass theta must be positive and finite");
  }
  if (!(lambda_rate > 0.0) || !std::isfinite(lambda_rate)) {
    throw DomainError("mark rate lambda must be positive and finite");
  }
  if (n < 1) throw DomainError("row count must be >= 1");
  if (truncation < 100) throw DomainError("truncation must be >= 100");

  const bool bernoulli_marks =
      std::holds_alternative<StableBetaCrm>(spec.family);
  // Bernoulli levels have mean s per row; Poisson levels have mean lambda*s.
  const double mark_rate = bernoulli_marks ? 1.0 : lambda_rate;

  std::function<double(double)> jump_of_arrival;
  if (std::holds_alternative<GammaCrm>(spec.family)) {
    jump_of_arrival = [theta](double w) {
      return expint_e1_inverse(w / theta);
    };
  } else if (const auto* gg = std::get_if<GeneralizedGammaCrm>(&spec.family)) {
    if (gg->alpha == 0.0) {
      throw DomainError("generalized-gamma measure degenerates at alpha = 0");
    }
    auto inverter = std::make_shared<GeneralizedGammaInverter>(*gg, theta);
    jump_of_arrival = [inverter](double w) { return inverter->jump(w); };
  } else {
    const auto& sb = std::get<StableBetaCrm>(spec.family);
    if (sb.beta == 1.0) {
      // N(x) = -theta ln x inverts in closed form.
      jump_of_arrival = [theta](double w) { return std::exp(-w / theta); };
    } else {
      auto inverter = std::make_shared<StableBetaInverter>(sb.beta, theta);
      jump_of_arrival = [inverter](double w) { return inverter->jump(w); };
    }
  }

  CounterRng rng = CounterRng::from_seed(seed, kTraitStream);
  IbpSample out;
  out.rows.resize(std::size_t(n));
  out.jumps.reserve(128);

  constexpr double kMarkEps = 1e-9;
  double arrival = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  double cutoff = 0.0;
  bool stopped_early = false;
  for (std::int64_t k = 0; k < truncation; ++k) {
    arrival += std::max(rng.next_exponential(), 1e-300);
    double x = jump_of_arrival(arrival);
    x = std::min(x, previous);  // guard monotonicity against solver jitter
    previous = x;
    cutoff = x;
    // Jumps only shrink from here, so the expected number of marks on this
    // and every remaining atom is at most n * rate * remaining * x.
    if (double(n) * mark_rate * double(truncation - k) * x < kMarkEps) {
      stopped_early = true;
      break;
    }
    const std::int64_t trait = std::int64_t(out.jumps.size());
    out.jumps.push_back(x);
    if (bernoulli_marks) {
      const double p = std::min(x, 1.0 - 1e-16);
      if (p >= 0.5) {
        for (std::int64_t i = 0; i < n; ++i) {
          if (rng.next_unit() < p) out.rows[std::size_t(i)][trait] = 1;
        }
      } else {
        const double log_q = std::log1p(-p);
        std::int64_t i = -1;
        while (true) {
          const double u = std::max(rng.next_unit(), 0x1.0p-53);
          i += 1 + std::int64_t(std::floor(std::log(u) / log_q));
          if (i >= n) break;
          out.rows[std::size_t(i)][trait] = 1;
        }
      }
    } else {
      // The n per-row Poisson(lambda*x) levels are recovered exactly by
      // drawing their Poisson total and scattering marks uniformly.
      const std::int64_t marks =
          rng.next_poisson(double(n) * lambda_rate * x);
      for (std::int64_t t = 0; t < marks; ++t) {
        out.rows[std::size_t(rng.next_below(std::uint64_t(n)))][trait] += 1;
      }
    }
  }

  out.truncated_mass = measure_mass_below(spec, theta, cutoff);
  out.truncation_warning =
      !stopped_early &&
      double(n) * mark_rate * out.truncated_mass > 1e-6;
  return out;
}

// ---------------------------------------------------------------------------
// Oracle result accessors
// ---------------------------------------------------------------------------

double PartitionOracleResult::total_mass() const {
  double total = 0.0;
  for (const auto& [key, p] : joint_) total += p;
  return total;
}

double PartitionOracleResult::sketch_marginal(
    const std::vector<std::int64_t>& counts) const {
  if (std::int64_t(counts.size()) != J_) {
    throw DomainError("counts width does not match the oracle's J");
  }
  double total = 0.0;
  for (std::int64_t j = 0; j < J_; ++j) {
    for (std::int64_t l = 0; l <= n_; ++l) {
      auto it = joint_.find({counts, j, l});
      if (it != joint_.end()) total += it->second;
    }
  }
  return total;
}

std::vector<double> PartitionOracleResult::conditional_freq(
    const std::vector<std::int64_t>& counts, std::int64_t j) const {
  if (std::int64_t(counts.size()) != J_) {
    throw DomainError("counts width does not match the oracle's J");
  }
  if (j < 0 || j >= J_) throw DomainError("bucket index out of range");
  const std::int64_t c_j = counts[std::size_t(j)];
  std::vector<double> probs(std::size_t(c_j) + 1, 0.0);
  double total = 0.0;
  for (std::int64_t l = 0; l <= c_j; ++l) {
    auto it = joint_.find({counts, j, l});
    if (it != joint_.end()) {
      probs[std::size_t(l)] = it->second;
      total += it->second;
    }
  }
  if (!(total > 0.0)) {
    throw DomainError("conditioning cell has zero probability");
  }
  for (double& p : probs) p /= total;
  return probs;
}

PartitionOracleResult partition_oracle(std::int64_t n, std::int64_t J,
                                       const PypParams& params) {
  params.validate();
  return build_freq_oracle(n, J, {params.alpha, params.gamma});
}

PartitionOracleResult partition_oracle(std::int64_t n, std::int64_t J,
                                       const DpParams& params) {
  params.validate();
  return build_freq_oracle(n, J, {0.0, params.theta});
}

void PartitionCardinalityOracle::add_mass(
    const std::vector<std::int64_t>& counts, double prob,
    const std::vector<std::int64_t>& m_profile) {
  prob_[counts] += prob;
  auto& sums = m_sums_[counts];
  if (sums.empty()) sums.assign(std::size_t(n_), 0.0);
  for (std::size_t l = 0; l < sums.size(); ++l) {
    sums[l] += prob * double(m_profile[l]);
  }
}

double PartitionCardinalityOracle::sketch_prob(
    const std::vector<std::int64_t>& counts) const {
  auto it = prob_.find(counts);
  return it == prob_.end() ? 0.0 : it->second;
}

std::vector<double> PartitionCardinalityOracle::expected_m(
    const std::vector<std::int64_t>& counts) const {
  const double p = sketch_prob(counts);
  if (!(p > 0.0)) throw DomainError("conditioning cell has zero probability");
  std::vector<double> out = m_sums_.at(counts);
  for (double& v : out) v /= p;
  return out;
}

double PartitionCardinalityOracle::total_mass() const {
  double total = 0.0;
  for (const auto& [counts, p] : prob_) total += p;
  return total;
}

PartitionCardinalityOracle partition_oracle_cardinality(
    std::int64_t n, std::int64_t J, const PypParams& params) {
  params.validate();
  return build_cardinality_oracle(n, J, {params.alpha, params.gamma});
}

PartitionCardinalityOracle partition_oracle_cardinality(
    std::int64_t n, std::int64_t J, const DpParams& params) {
  params.validate();
  return build_cardinality_oracle(n, J, {0.0, params.theta});
}

}  // namespace sketchpost
