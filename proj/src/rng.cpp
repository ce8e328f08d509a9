#include "sketchpost/rng.hpp"

#include <cmath>

#include "sketchpost/errors.hpp"

namespace sketchpost {

double CounterRng::next_exponential() {
  // next_unit() < 1, so 1 - u > 0 and the log is finite.
  return -std::log1p(-next_unit());
}

std::int64_t CounterRng::next_poisson(double mean) {
  if (!(mean >= 0.0)) throw DomainError("poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  std::int64_t total = 0;
  // Additivity: split large means into chunks so the product method below
  // never multiplies more than ~exp(-40) worth of uniforms at a time.
  while (mean > 40.0) {
    double half = mean * 0.5;
    total += next_poisson(half);
    mean -= half;
  }
  // Inversion by multiplication of uniforms, with an early exit on the first
  // uniform (the overwhelmingly common case for the tiny means produced by
  // truncated jump tails).
  const double floor = std::exp(-mean);
  double prod = next_unit();
  if (prod < floor) return total;
  std::int64_t k = 0;
  do {
    ++k;
    prod *= next_unit();
  } while (prod >= floor);
  return total + k;
}

double CounterRng::next_normal() {
  double u1 = 1.0 - next_unit();  // in (0, 1]
  double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace sketchpost
