#include "torus_stri/levels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "torus_stri/summation.hpp"

namespace torus {

double Level::height() const { return lambda * std::exp2(-0.5 * j); }

DyadicLevels::DyadicLevels(int m, int richness_c, std::vector<Level> levels)
    : m_(m), richness_c_(richness_c), levels_(std::move(levels)) {
  if (m_ < 1) throw ValidationError("invalid_levels", "number of levels must be >= 1");
  if (richness_c_ < 0) throw ValidationError("invalid_richness", "richness constant must be >= 0");
  if (levels_.size() != static_cast<std::size_t>(m_) + 1) {
    throw ValidationError("invalid_levels", "expected m+1 levels");
  }
}

std::optional<int> DyadicLevels::level_of(FreqPoint p) const {
  for (const auto& lv : levels_) {
    if (std::binary_search(lv.points.begin(), lv.points.end(), p)) return lv.j;
  }
  return std::nullopt;
}

std::size_t DyadicLevels::total_points() const {
  std::size_t n = 0;
  for (const auto& lv : levels_) n += lv.points.size();
  return n;
}

std::vector<FreqPoint> DyadicLevels::union_points() const {
  std::vector<FreqPoint> out;
  for (const auto& lv : levels_) out.insert(out.end(), lv.points.begin(), lv.points.end());
  std::sort(out.begin(), out.end());
  return out;
}

double DyadicLevels::lambda_l2_norm() const {
  CompensatedSum s;
  for (const auto& lv : levels_) s += lv.lambda * lv.lambda;
  return std::sqrt(s.value());
}

WeightedSpectrum DyadicLevels::envelope() const {
  std::vector<SpectrumEntry> e;
  for (const auto& lv : levels_) {
    const double h = lv.height();
    for (const auto& p : lv.points) e.push_back({p, Complex{h, 0.0}});
  }
  return WeightedSpectrum(std::move(e));
}

WeightedSpectrum DyadicLevels::restricted_source() const {
  std::vector<SpectrumEntry> e;
  for (const auto& lv : levels_) {
    for (std::size_t i = 0; i < lv.points.size(); ++i) {
      e.push_back({lv.points[i], Complex{lv.values[i], 0.0}});
    }
  }
  return WeightedSpectrum(std::move(e));
}

DyadicLevels DyadicLevels::without(const std::vector<std::vector<FreqPoint>>& removed) const {
  std::vector<Level> out = levels_;
  for (std::size_t j = 0; j < out.size() && j < removed.size(); ++j) {
    if (removed[j].empty()) continue;
    std::vector<FreqPoint> drop = removed[j];
    std::sort(drop.begin(), drop.end());
    Level kept{out[j].j, out[j].lambda, {}, {}};
    for (std::size_t i = 0; i < out[j].points.size(); ++i) {
      if (!std::binary_search(drop.begin(), drop.end(), out[j].points[i])) {
        kept.points.push_back(out[j].points[i]);
        kept.values.push_back(out[j].values[i]);
      }
    }
    out[j] = std::move(kept);
  }
  return DyadicLevels(m_, richness_c_, std::move(out));
}

std::vector<SpectrumEntry> descending_enumeration(const WeightedSpectrum& f) {
  std::vector<SpectrumEntry> order(f.entries().begin(), f.entries().end());
  // Entries arrive in lexicographic order; stable sort keeps that as the
  // tiebreak.
  std::stable_sort(order.begin(), order.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    return a.amplitude.real() > b.amplitude.real();
  });
  return order;
}

DyadicLevels build_levels(const WeightedSpectrum& f, int richness_c) {
  if (f.empty()) throw ValidationError("empty_spectrum", "cannot build levels of an empty spectrum");
  if (!f.is_nonnegative()) {
    throw ValidationError("negative_amplitude", "level construction requires a nonnegative spectrum");
  }
  const auto order = descending_enumeration(f);
  const std::size_t n = order.size();
  const int m = static_cast<int>(std::bit_width(n));

  std::vector<Level> levels(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    auto& lv = levels[static_cast<std::size_t>(j)];
    lv.j = j;
    const std::size_t first = std::size_t{1} << j;  // 1-based index xi_{2^j}
    if (first > n) continue;
    lv.lambda = std::exp2(0.5 * j) * order[first - 1].amplitude.real();
    const std::size_t last = std::min(n, (std::size_t{1} << (j + 1)) - 1);
    std::vector<SpectrumEntry> chunk(order.begin() + static_cast<std::ptrdiff_t>(first - 1),
                                     order.begin() + static_cast<std::ptrdiff_t>(last));
    std::sort(chunk.begin(), chunk.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.point < b.point; });
    for (const auto& e : chunk) {
      lv.points.push_back(e.point);
      lv.values.push_back(e.amplitude.real());
    }
  }
  return DyadicLevels(m, richness_c, std::move(levels));
}

}  // namespace torus
