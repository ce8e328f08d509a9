#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace sketchpost {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

inline double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf || std::isinf(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Streaming log(sum exp(x_i)) accumulator.  Rescales the running sum when a
// new maximum arrives, so it stays usable for millions of terms of wildly
// different magnitude (the Monte Carlo weight streams).
class LogSumAccumulator {
 public:
  void add(double x) {
    ++n_;
    if (x == kNegInf) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      if (max_ != kNegInf) sum_ *= std::exp(max_ - x);
      sum_ += 1.0;
      max_ = x;
    }
  }
  // log of the running sum (not averaged).
  double log_total() const {
    if (max_ == kNegInf || sum_ <= 0.0) return kNegInf;
    return max_ + std::log(sum_);
  }
  std::uint64_t count() const { return n_; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
  std::uint64_t n_ = 0;
};

// log C(n, k); returns -inf outside 0 <= k <= n.
inline double log_binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return kNegInf;
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

// Subtract the log normalizer in place; returns the log normalizer.
inline double normalize_log_probs(std::vector<double>& log_w) {
  double z = log_sum_exp(log_w);
  for (double& x : log_w) x -= z;
  return z;
}

}  // namespace sketchpost
