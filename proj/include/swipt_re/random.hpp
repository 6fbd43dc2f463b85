#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "swipt_re/core.hpp"

namespace swipt {

/// Standard normal source with a fixed algorithm: std::mt19937_64 (whose
/// output sequence is specified by the standard) feeding the trigonometric
/// Box-Muller transform on 53-bit uniforms. std::normal_distribution is
/// implementation-defined, so it is not used where seeds must reproduce
/// across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  Complex next_complex(double variance) {
    const double sd = std::sqrt(variance / 2.0);
    const double re = next();
    const double im = next();
    return {sd * re, sd * im};
  }

  /// Uniform on [0, 1), 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace swipt
