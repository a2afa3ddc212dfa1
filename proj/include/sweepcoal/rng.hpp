#pragma once
// Deterministic pseudo-random streams for replicate ensembles.
//
// Each replicate owns a xoshiro256++ stream whose state is derived from
// (master seed, stream tag, replicate index) via SplitMix64 finalizer mixes.
// A replicate's draws are therefore independent of thread scheduling:
// parallel and serial runs of the same ensemble consume identical randomness
// replicate by replicate, which is what makes ensemble summaries bit-stable
// under --threads variation.

#include <cmath>
#include <cstdint>
#include <limits>

namespace sweepcoal {

// SplitMix64 finalizer (stateless avalanche step).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  Rng() : Rng(0x853c49e6748fea9bull, 0, 0) {}

  Rng(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ (0x100000000ull + tag));
    h = mix64(h ^ index);
    // Expand into four non-zero state words with a SplitMix64 chain.
    std::uint64_t sm = h;
    for (auto& w : s_) {
      sm += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = sm;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      w = z ^ (z >> 31);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }
  result_type operator()() { return next(); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform01_open() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  double exponential(double rate) { return -std::log(uniform01_open()) / rate; }

  // Uniform integer in [0, bound); Lemire's unbiased multiply-shift rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t t = (0 - bound) % bound;
      while (lo < t) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Beta(1, b) via inverse CDF: F(x) = 1 - (1-x)^b. Valid for b >= 1.
  double beta_1_b(double b) { return -std::expm1(std::log(uniform01_open()) / b); }

  // Number of failures before the first success at probability p in (0,1].
  // Capped so callers can treat huge skips as "past the end of any range".
  std::uint64_t geometric_failures(double p) {
    if (p >= 1.0) return 0;
    const double g = std::floor(std::log(uniform01_open()) / std::log1p(-p));
    if (g >= 9.0e18) return ~0ull;
    return static_cast<std::uint64_t>(g);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

}  // namespace sweepcoal
