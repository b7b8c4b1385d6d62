#pragma once

#include <cstdint>

namespace floq {

// Counter-seeded xoshiro256++ stream.
//
// The stream produced for a (seed, realization, shot) triple is a pure
// function of the triple, so samples are reproducible regardless of how
// work is scheduled across threads.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t realization = 0, uint64_t shot = 0) {
    uint64_t x = seed;
    x = splitmix(x) ^ (realization * 0x9e3779b97f4a7c15ull);
    x = splitmix(x) ^ (shot * 0xbf58476d1ce4e5b9ull);
    for (auto& word : state_) word = splitmix(x);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [0, n); n must be positive.
  uint32_t next_below(uint32_t n) {
    // Rejection-free for our purposes: n is tiny (<= a few thousand), so the
    // modulo bias of a 64-bit draw is below 2^-40 and irrelevant next to
    // Monte Carlo error; use widening multiply to avoid the division.
    return static_cast<uint32_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

 private:
  static uint64_t splitmix(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace floq
