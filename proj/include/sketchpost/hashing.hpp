#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace sketchpost {

// 2^61 - 1, the Mersenne prime used as the hash field size.
inline constexpr std::uint64_t kHashPrime = (std::uint64_t{1} << 61) - 1;

// One draw from the pairwise-independent family
//   h(x) = ((a * enc(x) + b) mod p) mod J,
// with p = 2^61 - 1, a uniform in [1, p-1], b uniform in [0, p-1], and
// enc a seeded injective-in-practice byte mixer into [0, p).
struct HashFunction {
  std::uint64_t prime_modulus = kHashPrime;
  std::uint64_t coeff_a = 1;
  std::uint64_t coeff_b = 0;
  std::int64_t width_J = 1;
  std::uint64_t seed = 0;
};

// Bucketed counts for a token stream under a single hash function.
struct Sketch {
  std::vector<std::int64_t> counts;
  std::int64_t total_n = 0;
  std::int64_t width_J = 0;
  std::uint64_t hash_seed = 0;
};

// Draw (a, b) for the given width from the seed. Throws DomainError unless
// 1 <= J <= 2^31.
HashFunction new_hash(std::uint64_t seed, std::int64_t width_J);

// Bucket index in [0, J) for a token.
std::int64_t hash_key(const HashFunction& h, std::string_view key);

// Seeded mix of the raw bytes into [0, p); exposed for tests.
std::uint64_t encode_key(std::uint64_t seed, std::string_view key);

Sketch sketch_stream(const std::vector<std::string>& tokens,
                     const HashFunction& h);
// One whitespace-delimited token at a time from the stream.
Sketch sketch_stream(std::istream& tokens, const HashFunction& h);

void sketch_add(Sketch& sk, const HashFunction& h, std::string_view token);

// Counts add coordinatewise; both sides must share seed and width.
Sketch merge_sketches(const Sketch& a, const Sketch& b);

}  // namespace sketchpost
