// Deterministic random streams: xoshiro256++ seeded through splitmix64.
//
// std::mt19937 plus the standard distributions are avoided on purpose: the
// distribution algorithms are implementation-defined, and this library
// promises bit-identical output for a given seed. Everything downstream of a
// seed here is fully specified.
#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>

namespace dxhog {

// stateless finalizer from splitmix64; good 64->64 mixing
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// derives an independent stream seed; child(s, i) != child(s, j) for i != j
// with overwhelming probability, and children of distinct seeds collide only
// as 64-bit hashes do
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    // splitmix64 expansion; never yields the all-zero state
    std::uint64_t s = seed;
    for (auto& w : s_) {
      s += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = s;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
  }

  static RandomStream child(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(child_seed(seed, index));
  }

  std::uint64_t next_u64() {
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

  // uniform on [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]; safe as a log() argument
  double uniform01_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // unbiased integer on [0, bound) by rejection
  std::uint64_t next_below(std::uint64_t bound) {
    assert(bound > 0);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  bool coin(double p) { return uniform01() < p; }

  // standard normal via Box-Muller; pairs are cached
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace dxhog
