#pragma once

#include <cstdint>
#include <random>

namespace geowave {

// Seedable random stream with a stable cross-platform sequence.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// standard. Distribution mappings (which the standard does NOT pin) are
// implemented here explicitly, so a given seed yields bit-identical draws on
// every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0,1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the spare value is cached, so draws come
  // in a fixed order for a fixed seed.
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace geowave
