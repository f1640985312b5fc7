#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace lsq {

// Splittable counter-based pseudo-random generator.
//
// Each stream is identified by a 64-bit key; next_u64() applies the splitmix64
// output function to (key, counter). derive(id) produces a statistically
// independent child stream, so a loop can hand stream i to iteration i and the
// result does not depend on evaluation order. That is what makes parallel
// release loops reproduce the sequential output bit for bit.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : key_(mix(seed ^ kKeySalt)) {}

  // Independent stream for sub-task `id`.
  [[nodiscard]] SplitRng derive(std::uint64_t id) const {
    return SplitRng(FromKey{}, mix(key_ ^ mix(id + kDeriveSalt)));
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller; one value per call, no cached state.
  double normal() {
    double u1;
    do {
      u1 = next_double();
    } while (u1 == 0.0);
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Laplace(0, scale) by inverse CDF over u in (-1/2, 1/2).
  double laplace(double scale) {
    if (!(scale > 0.0)) {
      throw std::invalid_argument("laplace: scale must be positive");
    }
    double u;
    do {
      u = next_double() - 0.5;
    } while (u == -0.5);
    return scale * sign(u) * std::log(1.0 - 2.0 * std::abs(u));
  }

  // Standard Cauchy via tan(pi * (u - 1/2)).
  double cauchy() {
    double u;
    do {
      u = next_double();
    } while (u == 0.0);
    return std::tan(std::numbers::pi * (u - 0.5));
  }

  // Exp(1).
  double exponential() { return -std::log1p(-next_double()); }

  // Gamma(shape 2, scale 1), the sum of two unit exponentials.
  double gamma2() { return exponential() + exponential(); }

 private:
  struct FromKey {};
  SplitRng(FromKey, std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kKeySalt = 0xA0761D6478BD642Full;
  static constexpr std::uint64_t kDeriveSalt = 0xE7037ED1A0B428DBull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static double sign(double v) { return static_cast<double>(v > 0.0) - static_cast<double>(v < 0.0); }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lsq
