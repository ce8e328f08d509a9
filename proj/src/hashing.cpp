#include "sketchpost/hashing.hpp"

#include "sketchpost/errors.hpp"
#include "sketchpost/rng.hpp"

namespace sketchpost {

namespace {

// x mod (2^61 - 1) for x < 2^122, by Mersenne folding.
inline std::uint64_t mod_mersenne(unsigned __int128 x) {
  std::uint64_t lo = std::uint64_t(x) & kHashPrime;
  std::uint64_t hi = std::uint64_t(x >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kHashPrime) r -= kHashPrime;
  return r;
}

}  // namespace

HashFunction new_hash(std::uint64_t seed, std::int64_t width_J) {
  if (width_J < 1 || width_J > (std::int64_t{1} << 31)) {
    throw DomainError("hash width J must lie in [1, 2^31]");
  }
  CounterRng rng = CounterRng::from_seed(seed, 0x68617368u);  // per-purpose stream
  HashFunction h;
  h.coeff_a = 1 + rng.next_below(kHashPrime - 1);
  h.coeff_b = rng.next_below(kHashPrime);
  h.width_J = width_J;
  h.seed = seed;
  return h;
}

std::uint64_t encode_key(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : key) {
    h = mix64(h ^ c);
  }
  h = mix64(h ^ (std::uint64_t(key.size()) << 1));
  return h % kHashPrime;
}

std::int64_t hash_key(const HashFunction& h, std::string_view key) {
  if (h.width_J < 1) throw DomainError("hash width J must be >= 1");
  if (key.empty()) throw DomainError("cannot hash an empty key");
  std::uint64_t x = encode_key(h.seed, key);
  unsigned __int128 prod = (unsigned __int128)h.coeff_a * x + h.coeff_b;
  return std::int64_t(mod_mersenne(prod) % std::uint64_t(h.width_J));
}

Sketch sketch_stream(const std::vector<std::string>& tokens,
                     const HashFunction& h) {
  Sketch sk;
  sk.counts.assign(std::size_t(h.width_J), 0);
  sk.width_J = h.width_J;
  sk.hash_seed = h.seed;
  for (const std::string& t : tokens) sketch_add(sk, h, t);
  return sk;
}

Sketch sketch_stream(std::istream& tokens, const HashFunction& h) {
  Sketch sk;
  sk.counts.assign(std::size_t(h.width_J), 0);
  sk.width_J = h.width_J;
  sk.hash_seed = h.seed;
  std::string tok;
  while (tokens >> tok) sketch_add(sk, h, tok);
  return sk;
}

void sketch_add(Sketch& sk, const HashFunction& h, std::string_view token) {
  if (sk.width_J != h.width_J || sk.hash_seed != h.seed) {
    throw DomainError("sketch and hash function disagree on width or seed");
  }
  ++sk.counts[std::size_t(hash_key(h, token))];
  ++sk.total_n;
}

Sketch merge_sketches(const Sketch& a, const Sketch& b) {
  if (a.width_J != b.width_J || a.hash_seed != b.hash_seed) {
    throw DomainError("sketches must share width and hash seed to merge");
  }
  Sketch out = a;
  for (std::size_t j = 0; j < out.counts.size(); ++j) out.counts[j] += b.counts[j];
  out.total_n += b.total_n;
  return out;
}

}  // namespace sketchpost
