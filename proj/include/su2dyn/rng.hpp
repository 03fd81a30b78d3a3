#pragma once

// Counter-based random source.  Every draw is a pure function of
// (seed, counter), so streams can be sampled in any order, from any thread,
// and replayed exactly from a config seed.

#include <cmath>
#include <cstdint>

namespace su2dyn {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t raw(std::uint64_t counter) const {
    std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(raw(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }

  // Log-uniform in [lo, hi), lo > 0.
  double log_uniform(std::uint64_t counter, double lo, double hi) const {
    return std::exp(uniform(counter, std::log(lo), std::log(hi)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace su2dyn
