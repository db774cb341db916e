#pragma once

#include <cmath>
#include <cstdint>

namespace conewolff {

// Counter-based generator: value i of stream (seed, stream) is a pure function of
// its arguments, so parallel consumers can draw without sharing state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const { return mix(key_ + counter * 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0,1).
  double uniform(std::uint64_t counter) const { return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53; }
  double uniform(std::uint64_t counter, double lo, double hi) const { return lo + (hi - lo) * uniform(counter); }
  int sign(std::uint64_t counter) const { return (bits(counter) >> 63) ? -1 : 1; }

  // Sequential convenience wrapper.
  double next() { return uniform(counter_++); }
  double next(double lo, double hi) { return uniform(counter_++, lo, hi); }
  int next_sign() { return sign(counter_++); }
  double next_normal() {
    const double u1 = 1.0 - next();
    const double u2 = next();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace conewolff
