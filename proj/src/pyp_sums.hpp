#pragma once

// Shared internals for the exact two-parameter posterior sums: log-space
// polynomial convolution over per-bucket factorial-coefficient rows, plus
// sketch sanity checks.  Private to the library sources.

#include <algorithm>
#include <cmath>
#include <vector>

#include "sketchpost/errors.hpp"
#include "sketchpost/hashing.hpp"
#include "sketchpost/logspace.hpp"
#include "sketchpost/specialfns.hpp"

namespace sketchpost::detail {

inline void check_bucket(const Sketch& sk, std::int64_t j) {
  if (sk.width_J < 1 || std::int64_t(sk.counts.size()) != sk.width_J) {
    throw DomainError("sketch width and counts are inconsistent");
  }
  if (j < 0 || j >= sk.width_J) throw DomainError("bucket index out of range");
  std::int64_t n = 0;
  for (std::int64_t c : sk.counts) {
    if (c < 0) throw DomainError("negative bucket count");
    n += c;
  }
  if (n != sk.total_n) throw DomainError("sketch total_n disagrees with counts");
}

inline void check_exact_gate(const std::vector<std::int64_t>& counts) {
  double log_size = 0.0;
  for (std::int64_t c : counts) log_size += std::log(double(c) + 2.0);
  if (log_size > std::log(1e7)) {
    throw GateError("exact enumeration gate: prod_k (c_k + 2) must be <= 1e7");
  }
}

// Log-space polynomial convolution with the factorial-coefficient row of
// size m: out[t] = sum_i poly[t - i] * C(m, i; alpha).  Row 0 is the
// identity (C(0,0) = 1); rows m >= 1 have support i = 1..m.
inline std::vector<double> conv_row(const std::vector<double>& poly,
                                    std::int64_t m, const GfcTable& table) {
  if (m == 0) return poly;
  std::vector<double> out(poly.size() + std::size_t(m), kNegInf);
  for (std::size_t t = 0; t < out.size(); ++t) {
    double acc = kNegInf;
    const std::int64_t i_lo =
        std::max<std::int64_t>(1, std::int64_t(t) - std::int64_t(poly.size()) + 1);
    const std::int64_t i_hi = std::min<std::int64_t>(m, std::int64_t(t));
    for (std::int64_t i = i_lo; i <= i_hi; ++i) {
      double base = poly[t - std::size_t(i)];
      if (base == kNegInf) continue;
      acc = log_add(acc, base + table.log_at(m, i));
    }
    out[t] = acc;
  }
  return out;
}

// log sum_t poly[t] * Gamma(base + t) / J^t.
inline double tilted_total(const std::vector<double>& poly, double base,
                           double log_J) {
  double acc = kNegInf;
  for (std::size_t t = 0; t < poly.size(); ++t) {
    if (poly[t] == kNegInf) continue;
    acc = log_add(acc,
                  poly[t] + std::lgamma(base + double(t)) - double(t) * log_J);
  }
  return acc;
}

}  // namespace sketchpost::detail
