#pragma once

// Deterministic pseudo-random generator used by every sampling routine.
// The algorithm itself is the reproducibility contract: a 64-bit seed is
// expanded by SplitMix64 into the four state words of xoshiro256++, so a
// given seed yields the same stream on every platform and in every build.

#include <array>
#include <cmath>
#include <cstdint>

namespace tailmass {

// SplitMix64 (Steele, Lea, Flood): bijective 64-bit mix over a Weyl sequence.
// Used only to spread a user seed over full-width state words.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Stage seeds derived from one user seed so a single seed reproduces every
// stage of an experiment (network generation, then sampling) no matter which
// stages actually run.
struct DerivedSeeds {
  std::uint64_t net;
  std::uint64_t sample;

  explicit constexpr DerivedSeeds(std::uint64_t seed) : net(0), sample(0) {
    SplitMix64 sm(seed);
    net = sm.next();
    sample = sm.next();
  }
};

// xoshiro256++ (Blackman, Vigna). State seeded from SplitMix64(seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : state_) w = sm.next();
  }

  std::uint64_t next_u64() {
    auto& s = state_;
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). bound >= 1. Fixed-point multiply keeps the
  // draw a pure function of one generator step.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Exponential draw by inverse CDF: -log(1 - U) / rate.
  double exponential(double rate) { return -std::log1p(-next_double()) / rate; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace tailmass
