#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace pco {

/// SplitMix64: 64-bit state, increment 0x9e3779b97f4a7c15 and the
/// (30, 27, 31) xor-shift-multiply finalizer. Seeded with 1234567 its first
/// outputs are 6457827717110365317, 3203168211198807973, 9817491932198370423.
///
/// Doubles are the top 53 bits scaled by 2^-53, so every implementation that
/// follows this contract draws the same initial conditions from a seed.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n) via floor(uniform() * n).
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

 private:
  std::uint64_t state_;
};

}  // namespace pco
