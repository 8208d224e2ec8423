#include "torus_stri/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace torus {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ValidationError("invalid_range", "uniform_int requires lo <= hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

double Rng::normal() {
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<FreqPoint> random_point_set(Rng& rng, std::int64_t radius, std::size_t count) {
  const std::int64_t side = 2 * radius + 1;
  if (radius < 0 || static_cast<double>(count) > static_cast<double>(side) * static_cast<double>(side)) {
    throw ValidationError("invalid_argument", "requested more points than the box holds");
  }
  std::set<FreqPoint> chosen;
  std::vector<FreqPoint> out;
  out.reserve(count);
  while (out.size() < count) {
    const FreqPoint p{rng.uniform_int(-radius, radius), rng.uniform_int(-radius, radius)};
    if (chosen.insert(p).second) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

WeightedSpectrum random_nonnegative_spectrum(Rng& rng, std::int64_t radius, std::size_t count) {
  const auto pts = random_point_set(rng, radius, count);
  std::vector<SpectrumEntry> e;
  e.reserve(pts.size());
  for (const auto& p : pts) e.push_back({p, Complex{1.0 - rng.uniform(), 0.0}});
  return WeightedSpectrum(std::move(e));
}

WeightedSpectrum random_smooth_spectrum(Rng& rng, std::int64_t band, double decay) {
  std::vector<SpectrumEntry> e;
  for (std::int64_t x = -band; x <= band; ++x) {
    for (std::int64_t y = -band; y <= band; ++y) {
      const double re = rng.normal();
      const double im = rng.normal();
      const double damp = std::pow(1.0 + static_cast<double>(x * x + y * y), -decay);
      e.push_back({FreqPoint{x, y}, Complex{re, im} * damp});
    }
  }
  return WeightedSpectrum(std::move(e));
}

}  // namespace torus
