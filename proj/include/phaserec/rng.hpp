#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace phaserec {

/// Deterministic random stream: mt19937_64 drives explicit uniform /
/// Box-Muller / inverse-CDF transforms, so the byte stream depends only on
/// the seed (std::normal_distribution would be implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in (0, 1): 53-bit mantissa, never exactly 0.
  double uniform() {
    const std::uint64_t bits = gen_() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * 3.14159265358979323846 * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
  }

  double exponential() { return -std::log(uniform()); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace phaserec
