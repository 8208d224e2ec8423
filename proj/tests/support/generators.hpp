#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "torus_stri/lattice.hpp"
#include "torus_stri/spectrum.hpp"

namespace torus::testing {

// SplitMix64; kept separate from the library generator so properties are
// driven by an independent stream.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform in [lo, hi]; the modulo bias is irrelevant at these ranges.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::vector<FreqPoint> gen_points(Gen& g, std::int64_t radius, std::size_t count) {
  std::set<FreqPoint> s;
  const std::int64_t side = 2 * radius + 1;
  count = std::min<std::size_t>(count, static_cast<std::size_t>(side * side));
  while (s.size() < count) s.emplace(g.range(-radius, radius), g.range(-radius, radius));
  return {s.begin(), s.end()};
}

inline WeightedSpectrum gen_nonnegative(Gen& g, std::int64_t radius, std::size_t count) {
  std::vector<SpectrumEntry> e;
  for (FreqPoint p : gen_points(g, radius, count)) e.push_back({p, Complex(0.05 + g.unit(), 0.0)});
  return WeightedSpectrum(std::move(e));
}

inline WeightedSpectrum gen_complex(Gen& g, std::int64_t radius, std::size_t count) {
  std::vector<SpectrumEntry> e;
  for (FreqPoint p : gen_points(g, radius, count)) {
    e.push_back({p, Complex(g.unit() * 2.0 - 1.0, g.unit() * 2.0 - 1.0)});
  }
  return WeightedSpectrum(std::move(e));
}

}  // namespace torus::testing
