#pragma once

#include <cstdint>

namespace sketchpost {

// 64-bit finalizer (splitmix64 style): bijective, avalanching.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Counter-based generator: output i is a pure function of (key, i), so any
// draw can be reproduced without replaying the stream, and substreams keyed
// off (seed, stream_id) are mutually independent for Monte Carlo chunking.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static CounterRng from_seed(std::uint64_t seed, std::uint64_t stream_id) {
    // Double mixing keeps distinct (seed, id) pairs from colliding even for
    // adjacent seeds/ids.
    return CounterRng(mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                            mix64(stream_id + 0xd1b54a32d192ed03ULL)));
  }

  std::uint64_t next_u64() {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * (++ctr_));
  }

  // Uniform in [0, 1); 53 random bits.
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); rejection keeps it exactly uniform.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Exponential with mean 1.
  double next_exponential();

  // Poisson with the given mean (>= 0).
  std::int64_t next_poisson(double mean);

  // Standard normal (Box-Muller; uses two uniforms per call, no caching so
  // the counter stream stays reproducible under reordering).
  double next_normal();

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace sketchpost
