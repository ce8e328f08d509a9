#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

namespace sketchpost {

// Levy-density families for the random-measure kernels below.  Densities are
// written without the total-mass factor; theta (or theta/J after bucket
// thinning) multiplies the exponent where it appears.
struct GammaCrm {};  // rho(s) = s^{-1} e^{-s} on (0, inf)
struct GeneralizedGammaCrm {
  double alpha;  // in [0, 1); alpha = 0 degenerates (see kernel functions)
  double tau;    // > 0
};
struct StableBetaCrm {
  double beta;  // > 0; rho(s) = s^{-1} (1 - s)^{beta - 1} on (0, 1)
};

struct CrmSpec {
  std::variant<GammaCrm, GeneralizedGammaCrm, StableBetaCrm> family;
  double total_mass_theta = 1.0;

  void validate() const;  // throws DomainError on out-of-range parameters

  static CrmSpec gamma(double theta);
  static CrmSpec generalized_gamma(double theta, double alpha, double tau);
  static CrmSpec stable_beta(double theta, double beta);
};

// log of the rising factorial (x)_n = x (x+1) ... (x+n-1), n >= 0.
// Returns -inf when the product is exactly zero; throws DomainError when the
// product is negative (log undefined), PoleError never arises for n >= 0
// since (x)_n is a polynomial.
double log_rising(double x, std::int64_t n);

// Digamma function.  Throws PoleError at nonpositive integers.
double digamma(double x);

// Exponential integral E1(x), x > 0.
double expint_e1(double x);

// Triangular table of log generalized factorial coefficients for a fixed
// alpha in (0, 1):  C(n, k; alpha), 0 <= k <= n, with C(0,0) = 1 and
// C(n, 0) = 0 for n >= 1.  Built by the two-term recurrence
//   C(n+1, k) = (n - k alpha) C(n, k) + alpha C(n, k-1),
// whose terms are both nonnegative on the support, so the log-space build is
// subtraction-free.
class GfcTable {
 public:
  // Gate: n_max <= 100000 is refused far earlier; the documented limit is
  // n_max <= 10000 (the full table then needs ~400 MB).
  GfcTable(std::int64_t n_max, double alpha);

  // log C(n, k; alpha); -inf outside the support.
  double log_at(std::int64_t n, std::int64_t k) const;

  std::int64_t n_max() const { return n_max_; }
  double alpha() const { return alpha_; }

 private:
  std::int64_t n_max_;
  double alpha_;
  std::vector<double> log_values_;  // row-major triangular
};

// Shared memoized table per alpha; rebuilt when a larger n_max is requested.
std::shared_ptr<const GfcTable> gfc_table(std::int64_t n_max, double alpha);

// integral_0^1 g(s) (1 - s)^{beta - 1} ds by quadrature, with the endpoint
// weight absorbed exactly through the substitution 1 - s = v^{1/beta}.
// Shared by the stable-beta kernels and the binary-trait integrals.
double stable_beta_weighted_integral(double beta,
                                     const std::function<double(double)>& g);

// Laplace exponent psi(u) = integral (1 - e^{-us}) rho(s) ds, u >= 0.
double crm_psi(const CrmSpec& spec, double u);

// log kappa(u, m) = log integral e^{-us} s^m rho(s) ds, m >= 1, u >= 0.
double crm_kappa(const CrmSpec& spec, double u, std::int64_t m);

// Logs of the alternating-sign derivatives of exp(-vartheta psi(u)):
// entry m is log((-1)^m d^m/du^m exp(-vartheta psi(u))), m = 0..m_max,
// computed by the product-rule recurrence
//   phi^{(m+1)}(u) = vartheta * sum_i binom(m, i) kappa(u, m+1-i) phi^{(i)}(u)
// in log space (every term is positive).  vartheta = theta_over_J.
std::vector<double> phi_derivatives(const CrmSpec& spec, double theta_over_J,
                                    double u, std::int64_t m_max);

// Independent closed-form evaluations of the same derivatives, used both as
// cross-checks for the recurrence and as fast paths by the trait posteriors.
double log_phi_gamma_closed(double theta_over_J, double u, std::int64_t m);
double log_phi_gg_closed(double theta_over_J, double alpha, double tau,
                         double u, std::int64_t m, const GfcTable& table);

}  // namespace sketchpost
