#include "sketchpost/specialfns.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "sketchpost/errors.hpp"
#include "sketchpost/logspace.hpp"
#include "sketchpost/quadrature.hpp"

namespace sketchpost {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

void CrmSpec::validate() const {
  if (!(total_mass_theta > 0.0) || !std::isfinite(total_mass_theta)) {
    throw DomainError("total mass theta must be positive and finite");
  }
  if (const auto* gg = std::get_if<GeneralizedGammaCrm>(&family)) {
    if (!(gg->alpha >= 0.0 && gg->alpha < 1.0)) {
      throw DomainError("generalized-gamma alpha must lie in [0, 1)");
    }
    if (!(gg->tau > 0.0) || !std::isfinite(gg->tau)) {
      throw DomainError("generalized-gamma tau must be positive and finite");
    }
  } else if (const auto* sb = std::get_if<StableBetaCrm>(&family)) {
    if (!(sb->beta > 0.0) || !std::isfinite(sb->beta)) {
      throw DomainError("stable-beta beta must be positive and finite");
    }
  }
}

CrmSpec CrmSpec::gamma(double theta) {
  CrmSpec s{GammaCrm{}, theta};
  s.validate();
  return s;
}

CrmSpec CrmSpec::generalized_gamma(double theta, double alpha, double tau) {
  CrmSpec s{GeneralizedGammaCrm{alpha, tau}, theta};
  s.validate();
  return s;
}

CrmSpec CrmSpec::stable_beta(double theta, double beta) {
  CrmSpec s{StableBetaCrm{beta}, theta};
  s.validate();
  return s;
}

double log_rising(double x, std::int64_t n) {
  if (n < 0) throw DomainError("rising factorial needs n >= 0");
  if (n == 0) return 0.0;
  if (x > 0.0) return std::lgamma(x + double(n)) - std::lgamma(x);
  // Nonpositive start: walk the polynomial directly, tracking the sign.
  long double mag = 0.0L;
  bool negative = false;
  for (std::int64_t i = 0; i < n; ++i) {
    double f = x + double(i);
    if (f == 0.0) return kNegInf;
    if (f < 0.0) negative = !negative;
    mag += std::log(std::abs((long double)f));
  }
  if (negative) throw DomainError("rising factorial is negative; log undefined");
  return double(mag);
}

double digamma(double x) {
  if (std::isnan(x)) throw DomainError("digamma of NaN");
  if (x <= 0.0) {
    if (x == std::floor(x)) throw PoleError("digamma pole at nonpositive integer");
    // Reflection keeps the series argument positive.
    return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  }
  double acc = 0.0;
  while (x < 8.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic series: psi(x) ~ ln x - 1/(2x) - sum_k B_{2k} / (2k x^{2k}).
  // At x >= 8 the first dropped term is below 2e-15.
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12 +
              inv2 * (-1.0 / 120 +
                      inv2 * (1.0 / 252 +
                              inv2 * (-1.0 / 240 +
                                      inv2 * (1.0 / 132 +
                                              inv2 * (-691.0 / 32760 +
                                                      inv2 * (1.0 / 12)))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double expint_e1(double x) {
  if (!(x > 0.0)) throw DomainError("E1 requires x > 0");
  if (x <= 1.0) {
    // Power series around 0.
    const double kEuler = 0.57721566490153286060651209;
    double sum = 0.0;
    double ak = 1.0;  // x^k / k!
    double sign = 1.0;
    for (int k = 1; k <= 64; ++k) {
      ak *= x / k;
      double term = sign * ak / k;
      sum += term;
      if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
      sign = -sign;
    }
    return -kEuler - std::log(x) + sum;
  }
  // Continued fraction (modified Lentz) for large arguments.
  const double tiny = 1e-300;
  double f = x + 1.0;
  if (f == 0.0) f = tiny;
  double c = f, d = 0.0;
  for (int j = 1; j <= 200; ++j) {
    double aj = -double(j) * double(j);
    double bj = x + 2.0 * j + 1.0;
    d = bj + aj * d;
    if (d == 0.0) d = tiny;
    c = bj + aj / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x) / f;
}

GfcTable::GfcTable(std::int64_t n_max, double alpha)
    : n_max_(n_max), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("factorial-coefficient table needs alpha in (0, 1)");
  }
  if (n_max < 0) throw DomainError("table size must be nonnegative");
  if (n_max > 10000) {
    throw GateError("factorial-coefficient table capped at n_max = 10000");
  }
  log_values_.assign(std::size_t((n_max + 1) * (n_max + 2) / 2), kNegInf);
  auto at = [this](std::int64_t n, std::int64_t k) -> double& {
    return log_values_[std::size_t(n * (n + 1) / 2 + k)];
  };
  at(0, 0) = 0.0;  // C(0, 0) = 1 by convention; C(n, 0) = 0 for n >= 1.
  const double log_alpha = std::log(alpha);
  for (std::int64_t n = 0; n < n_max; ++n) {
    for (std::int64_t k = 1; k <= n + 1; ++k) {
      double keep = k <= n ? std::log(double(n) - double(k) * alpha) + at(n, k)
                           : kNegInf;
      double carry = log_alpha + at(n, k - 1);
      at(n + 1, k) = log_add(keep, carry);
    }
  }
}

double GfcTable::log_at(std::int64_t n, std::int64_t k) const {
  if (n < 0 || n > n_max_) throw DomainError("table row out of range");
  if (k < 0 || k > n) return kNegInf;
  return log_values_[std::size_t(n * (n + 1) / 2 + k)];
}

std::shared_ptr<const GfcTable> gfc_table(std::int64_t n_max, double alpha) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const GfcTable>> cache;
  std::uint64_t key;
  static_assert(sizeof(key) == sizeof(alpha));
  std::memcpy(&key, &alpha, sizeof(key));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end() && it->second->n_max() >= n_max) return it->second;
  }
  auto built = std::make_shared<const GfcTable>(n_max, alpha);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot || slot->n_max() < n_max) slot = built;
  return slot;
}

namespace {

// (1 - e^{-us}) / s, stable for small us.
double one_minus_exp_over(double u, double s) {
  if (s <= 0.0) return u;
  return -std::expm1(-u * s) / s;
}

const GeneralizedGammaCrm& require_nondegenerate(const GeneralizedGammaCrm& gg) {
  if (gg.alpha == 0.0) {
    throw DomainError(
        "generalized-gamma kernels degenerate at alpha = 0 (exponent vanishes)");
  }
  return gg;
}

}  // namespace

// The substitution 1 - s = v^{1/beta} absorbs the (1-s)^{beta-1} endpoint
// weight exactly:
//   integral_0^1 g(s) (1-s)^{beta-1} ds = (1/beta) integral_0^1 g(1-v^{1/beta}) dv,
// so the transformed integrand is smooth whenever g is.
double stable_beta_weighted_integral(double beta,
                                     const std::function<double(double)>& g) {
  if (!(beta > 0.0)) throw DomainError("weighted integral requires beta > 0");
  auto integrand = [&](double v) {
    double s = 1.0 - std::pow(v, 1.0 / beta);
    s = std::clamp(s, 0.0, 1.0);
    return g(s);
  };
  return integrate_or_throw(integrand, 0.0, 1.0, 1e-12, 1e-10) / beta;
}

double crm_psi(const CrmSpec& spec, double u) {
  spec.validate();
  if (!(u >= 0.0)) throw DomainError("psi requires u >= 0");
  if (u == 0.0) return 0.0;
  if (std::holds_alternative<GammaCrm>(spec.family)) {
    return std::log1p(u);
  }
  if (const auto* gg = std::get_if<GeneralizedGammaCrm>(&spec.family)) {
    require_nondegenerate(*gg);
    return std::pow(gg->tau + u, gg->alpha) - std::pow(gg->tau, gg->alpha);
  }
  const auto& sb = std::get<StableBetaCrm>(spec.family);
  return stable_beta_weighted_integral(
      sb.beta, [u](double s) { return one_minus_exp_over(u, s); });
}

double crm_kappa(const CrmSpec& spec, double u, std::int64_t m) {
  spec.validate();
  if (m < 1) throw DomainError("kappa requires m >= 1");
  if (!(u >= 0.0)) throw DomainError("kappa requires u >= 0");
  if (std::holds_alternative<GammaCrm>(spec.family)) {
    return std::lgamma(double(m)) - double(m) * std::log1p(u);
  }
  if (const auto* gg = std::get_if<GeneralizedGammaCrm>(&spec.family)) {
    require_nondegenerate(*gg);
    return std::log(gg->alpha) + log_rising(1.0 - gg->alpha, m - 1) +
           (gg->alpha - double(m)) * std::log(gg->tau + u);
  }
  const auto& sb = std::get<StableBetaCrm>(spec.family);
  double value = stable_beta_weighted_integral(sb.beta, [u, m](double s) {
    if (s <= 0.0) return m == 1 ? 1.0 : 0.0;  // e^{-us} s^{m-1} at s -> 0
    return std::exp(-u * s + (double(m) - 1.0) * std::log(s));
  });
  if (!(value > 0.0)) return kNegInf;
  return std::log(value);
}

std::vector<double> phi_derivatives(const CrmSpec& spec, double theta_over_J,
                                    double u, std::int64_t m_max) {
  spec.validate();
  if (!(theta_over_J > 0.0)) throw DomainError("theta/J must be positive");
  if (m_max < 0) throw DomainError("derivative order must be >= 0");
  if (m_max > 20000) throw GateError("derivative order capped at 20000");
  std::vector<double> log_phi(std::size_t(m_max + 1));
  log_phi[0] = -theta_over_J * crm_psi(spec, u);
  if (m_max == 0) return log_phi;
  std::vector<double> log_kap(std::size_t(m_max + 1));
  for (std::int64_t m = 1; m <= m_max; ++m) log_kap[std::size_t(m)] = crm_kappa(spec, u, m);
  // Cumulative log factorials keep the binomial coefficients exact-ish.
  std::vector<double> lfact(std::size_t(m_max + 1), 0.0);
  for (std::int64_t j = 1; j <= m_max; ++j) {
    lfact[std::size_t(j)] = lfact[std::size_t(j - 1)] + std::log(double(j));
  }
  const double log_vt = std::log(theta_over_J);
  std::vector<double> terms;
  for (std::int64_t m = 0; m < m_max; ++m) {
    terms.clear();
    for (std::int64_t i = 0; i <= m; ++i) {
      double log_c = lfact[std::size_t(m)] - lfact[std::size_t(i)] -
                     lfact[std::size_t(m - i)];
      terms.push_back(log_c + log_kap[std::size_t(m + 1 - i)] + log_phi[std::size_t(i)]);
    }
    log_phi[std::size_t(m + 1)] = log_vt + log_sum_exp(terms);
  }
  return log_phi;
}

double log_phi_gamma_closed(double theta_over_J, double u, std::int64_t m) {
  if (!(theta_over_J > 0.0)) throw DomainError("theta/J must be positive");
  if (m < 0) throw DomainError("derivative order must be >= 0");
  return log_rising(theta_over_J, m) -
         (theta_over_J + double(m)) * std::log1p(u);
}

double log_phi_gg_closed(double theta_over_J, double alpha, double tau,
                         double u, std::int64_t m, const GfcTable& table) {
  if (!(theta_over_J > 0.0)) throw DomainError("theta/J must be positive");
  if (m < 0) throw DomainError("derivative order must be >= 0");
  CrmSpec spec = CrmSpec::generalized_gamma(1.0, alpha, tau);
  double log_phi0 = -theta_over_J * crm_psi(spec, u);
  if (m == 0) return log_phi0;
  if (m > table.n_max()) throw DomainError("table too small for requested order");
  const double log_vt = std::log(theta_over_J);
  const double log_tu = std::log(tau + u);
  std::vector<double> terms;
  for (std::int64_t i = 1; i <= m; ++i) {
    terms.push_back(double(i) * log_vt + table.log_at(m, i) -
                    (double(m) - alpha * double(i)) * log_tu);
  }
  return log_phi0 + log_sum_exp(terms);
}

}  // namespace sketchpost
