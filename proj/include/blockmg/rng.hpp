#pragma once

#include <cstdint>

#include "blockmg/types.hpp"

namespace bmg {

// SplitMix64 finalizer (Steele et al.), used as the mixing function of a
// counter-based stream: entry i depends only on (seed, i), so streams are
// reproducible across platforms and any entry can be generated out of order.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t i) const {
    return mix64(seed_ + (i + 1) * 0x9e3779b97f4a7c15ULL);
  }

  // uniform in (0, 1)
  double uniform(std::uint64_t i) const {
    return (static_cast<double>(bits(i) >> 11) + 0.5) * 0x1.0p-53;
  }

  // uniform in (-1, 1)
  double symmetric(std::uint64_t i) const { return 2.0 * uniform(i) - 1.0; }

 private:
  std::uint64_t seed_;
};

// Sequential convenience wrapper around CounterRng.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return rng_.uniform(next_++); }
  double symmetric() { return rng_.symmetric(next_++); }
  // integer in [0, n)
  int below(int n) { return static_cast<int>(rng_.bits(next_++) % static_cast<std::uint64_t>(n)); }

  Vector vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = symmetric();
    return v;
  }

 private:
  CounterRng rng_;
  std::uint64_t next_ = 0;
};

}  // namespace bmg
