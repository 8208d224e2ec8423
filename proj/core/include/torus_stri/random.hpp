#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "torus_stri/lattice.hpp"
#include "torus_stri/spectrum.hpp"

namespace torus {

// Seeded generator: std::mt19937_64 (its output sequence is fixed by the
// C++ standard). The distributions below are written out by hand because
// the standard library distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi], by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

// `count` distinct points drawn uniformly from [-radius, radius]^2.
std::vector<FreqPoint> random_point_set(Rng& rng, std::int64_t radius, std::size_t count);

// Nonnegative spectrum on a random support with amplitudes in (0, 1].
WeightedSpectrum random_nonnegative_spectrum(Rng& rng, std::int64_t radius, std::size_t count);

// Complex spectrum on [-band, band]^2 with Gaussian amplitudes damped by
// (1+|xi|^2)^(-decay); used as smooth initial data.
WeightedSpectrum random_smooth_spectrum(Rng& rng, std::int64_t band, double decay);

}  // namespace torus
