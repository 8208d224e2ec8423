#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "torus_stri/lattice.hpp"
#include "torus_stri/levels.hpp"
#include "torus_stri/quadruple.hpp"
#include "torus_stri/spectrum.hpp"

namespace torus {

// A lattice line: primitive direction (x > 0, or x == 0 and y > 0) and the
// offset perp(direction) . p shared by all of its points p.
struct Line {
  FreqPoint direction;
  std::int64_t offset = 0;

  static Line through(FreqPoint p, FreqPoint q);
  // The line through p with direction parallel to v (v != 0).
  static Line along(FreqPoint p, FreqPoint v);
  bool contains(FreqPoint p) const { return dot(perp(direction), p) == offset; }

  friend constexpr auto operator<=>(const Line&, const Line&) = default;
};

struct LineHash {
  std::size_t operator()(const Line& l) const noexcept {
    return FreqPointHash{}(l.direction) * 31u + std::hash<std::int64_t>{}(l.offset);
  }
};

struct LineIncidence {
  Line line;
  std::vector<FreqPoint> points;  // lexicographic, at least two
};

inline constexpr std::size_t kCollectLinesCap = 100000;

// Every line through at least two points of S with its full incidence
// list, sorted by line. Independent of input order; duplicates ignored.
std::vector<LineIncidence> collect_lines(std::span<const FreqPoint> points,
                                         std::size_t cap = kCollectLinesCap);

struct RichLineReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  double ratio = 0.0;  // m / (n^2/k^3 + n/k)
  std::vector<Line> lines;
};

double szemeredi_trotter_ratio(std::size_t m, std::size_t n, std::size_t k);

// Lines with at least k points of S (k >= 2).
RichLineReport rich_lines(std::span<const FreqPoint> points, std::size_t k);

// m(k) for every k in [2, n] from a single line collection; entry i holds
// the report for k = i + 2. Line lists are left empty.
std::vector<RichLineReport> rich_line_profile(std::span<const FreqPoint> points);

// count >= 2^{j/2 + C}, evaluated in integers as count^2 >= 2^{j + 2C}.
bool is_rich(std::size_t count, int j, int c);

// Number of points of `level` on each line through two of them.
class LineCounts {
 public:
  explicit LineCounts(std::span<const FreqPoint> level);
  // #(line through p along v, intersected with the level); p is assumed to
  // belong to the level, so the result is at least 1.
  std::size_t count_through(FreqPoint p, FreqPoint v) const;
  std::size_t count(const Line& line) const;
  const std::vector<LineIncidence>& lines() const noexcept { return lines_; }

 private:
  std::vector<LineIncidence> lines_;
  std::vector<std::pair<Line, std::size_t>> sorted_;
};

struct Cross {
  FreqPoint point;
  int j = 0;
  Line line1;  // direction with x > 0 and y >= 0
  Line line2;  // orthogonal to line1
  std::size_t count1 = 0;
  std::size_t count2 = 0;
  double a = 0.0;  // log2 max(count1, count2)
  int type = 3;
};

int cross_type(std::size_t max_count, int j, int c);

// Orthogonal direction pair through p: (d, perp d) with d taken from v.
Cross make_cross(FreqPoint p, int j, FreqPoint v, const LineCounts& counts, int c);

// Crosses realized by distinct-vertex rectangles in the union of the
// levels, plus the axis-aligned cross at every point. Sorted by (point,
// line1), each listed once.
std::vector<Cross> classify_crosses(const DyadicLevels& levels);

struct ExceptionalSets {
  std::vector<std::vector<FreqPoint>> sets;   // E_j, lexicographic
  std::vector<std::size_t> rich_line_counts;  // rich lines of S_j^0
  // sqrt(#E_j) <= number of rich lines, for every j.
  bool bound_holds = true;
};

// Points of each level lying on two lines that are rich for that level.
ExceptionalSets exceptional_sets(const DyadicLevels& levels);

// Largest number of rich lines through a single point of a level, over all
// levels. At most 1 means every point has at most one rich line.
std::size_t max_rich_lines_through_point(const DyadicLevels& levels);

struct DecompositionStep {
  int n = 0;
  double l2_norm = 0.0;  // ||f_n||
  bool halved = false;   // ||f_{n+1}|| <= ||f_n|| / 2
  WeightedSpectrum f;    // f_n
  WeightedSpectrum h;    // f_n restricted to the union of the S_j
  DyadicLevels levels;   // S_j = S_j^0 \ E_j with the lambda_j of f_n
  ExceptionalSets exceptional;
};

struct DecompositionTrace {
  int richness_c = 0;
  std::vector<DecompositionStep> steps;
  bool all_halved = true;
  // False if the iteration stopped without exhausting f (stall or step cap).
  bool converged = true;

  WeightedSpectrum reconstruct() const;  // sum_n h_n
};

inline constexpr int kMaxDecompositionSteps = 64;

DecompositionTrace decompose(const WeightedSpectrum& f, int richness_c);

inline constexpr std::size_t kRectangleBinCap = 2000;

struct RectangleBin {
  std::array<int, 4> j{};
  std::array<int, 4> a{};
  std::int64_t count = 0;
  double gcd_weighted = 0.0;  // sum of 1/gcd(xi1 - xi4)

  // count / 2^{2 j1 - 2 a1 + a2 + a4}, count / 2^{2 j1 - 2 a1 + a2 + a3}
  // and gcd_weighted / 2^{2 j1 - 2 a1 + a2 + a4/2}; defined when
  // 1 <= a1 < j1/2 + C.
  std::optional<double> ratio_a2_a4;
  std::optional<double> ratio_a2_a3;
  std::optional<double> ratio_gcd;
  // count / 2^{j1 + j2 + a3}
  double ratio_j1_j2_a3 = 0.0;
};

struct BinKey {
  std::array<int, 4> j{};
  std::array<int, 4> a{};
};

// Bin of one rectangle: level of each vertex and a_k = floor log2 of the
// richer of the two edge lines at xi_k within S_{j_k}.
BinKey rectangle_bin_key(const DyadicLevels& levels, const std::vector<LineCounts>& counts,
                         const Parallelogram& q);

std::vector<LineCounts> level_line_counts(const DyadicLevels& levels);

// Exact per-bin counts over every distinct-vertex rectangle with vertices in
// the union of the levels; bins sorted by (j, a).
std::vector<RectangleBin> rectangle_bins(const DyadicLevels& levels,
                                         std::size_t cap = kRectangleBinCap);

struct BinBoundSummary {
  double max_ratio_a2_a4 = 0.0;
  double max_ratio_a2_a3 = 0.0;
  double max_ratio_gcd = 0.0;
  double max_ratio_j1_j2_a3 = 0.0;
};

BinBoundSummary summarize_bins(std::span<const RectangleBin> bins);

struct TypeSums {
  // sums[alpha-1][beta-1] = sum over Q in Q^0_{alpha,beta} of f(Q)
  std::array<std::array<double, 3>, 3> sums{};
  double gcd_weighted_22 = 0.0;
  double unclassified = 0.0;  // rectangles whose xi1, xi2 or xi3, xi4 types differ
  double lambda_norm4 = 0.0;  // ||lambda||^4
  int m = 0;

  double ratio(int alpha, int beta) const;  // sum / ||lambda||^4
  double ratio_22_over_m() const;           // sum_22 / (m ||lambda||^4)
  double ratio_gcd_22() const;              // gcd_weighted_22 / ||lambda||^4
};

// Type-pair sums with f(Q) = f(xi1) f(xi2) f(xi3) f(xi4). When f is
// omitted the envelope sum_j lambda_j 2^{-j/2} chi_{S_j} is used.
TypeSums type_sums(const DyadicLevels& levels, const std::optional<WeightedSpectrum>& f = std::nullopt,
                   std::size_t cap = kRectangleBinCap);

// CSV: "n,k,m,ratio", "j1,j2,j3,j4,a1,a2,a3,a4,count,gcd_weighted",
// "n,l2_norm,halved".
void write_rich_lines_csv(std::ostream& out, std::span<const RichLineReport> rows);
void write_bins_csv(std::ostream& out, std::span<const RectangleBin> bins);
void write_decomposition_csv(std::ostream& out, const DecompositionTrace& trace);

}  // namespace torus
