#pragma once

#include <optional>
#include <vector>

#include "torus_stri/lattice.hpp"
#include "torus_stri/spectrum.hpp"

namespace torus {

// One dyadic level: the point set S_j (at most 2^j points), its amplitude
// lambda_j, and the values of the source function on S_j.
struct Level {
  int j = 0;
  double lambda = 0.0;
  std::vector<FreqPoint> points;  // lexicographic
  std::vector<double> values;     // source values, aligned with points

  // lambda_j * 2^{-j/2}: the ceiling for every value in the level.
  double height() const;
};

// f = sum_j lambda_j 2^{-j/2} chi_{S_j} style decomposition data.
class DyadicLevels {
 public:
  DyadicLevels(int m, int richness_c, std::vector<Level> levels);

  int m() const noexcept { return m_; }
  int richness_c() const noexcept { return richness_c_; }
  const std::vector<Level>& levels() const noexcept { return levels_; }
  const Level& level(int j) const { return levels_.at(static_cast<std::size_t>(j)); }

  // Index of the level containing p, if any.
  std::optional<int> level_of(FreqPoint p) const;
  std::size_t total_points() const;
  std::vector<FreqPoint> union_points() const;

  // (sum_j lambda_j^2)^{1/2}
  double lambda_l2_norm() const;
  // g = sum_j lambda_j 2^{-j/2} chi_{S_j}
  WeightedSpectrum envelope() const;
  // Source values restricted to the union of the levels.
  WeightedSpectrum restricted_source() const;

  // Same lambdas; each S_j replaced by S_j minus removed[j].
  DyadicLevels without(const std::vector<std::vector<FreqPoint>>& removed) const;

 private:
  int m_;
  int richness_c_;
  std::vector<Level> levels_;
};

// Sorted-enumeration level construction for a nonnegative finitely
// supported f. Ties in value are broken lexicographically by frequency.
// m is the least integer greater than log2 #supp f; levels j = 0..m.
DyadicLevels build_levels(const WeightedSpectrum& f, int richness_c);

// Lexicographic-tiebreak descending enumeration of supp f.
std::vector<SpectrumEntry> descending_enumeration(const WeightedSpectrum& f);

}  // namespace torus
