#pragma once

#include <cstdint>
#include <random>

namespace fwipm {

/// Seeded generator shared by instance generation and the oracle suites.
/// Uniform draws are built from raw 64-bit outputs rather than
/// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fwipm
