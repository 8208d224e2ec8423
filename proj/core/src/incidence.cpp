#include "torus_stri/incidence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "torus_stri/format.hpp"
#include "torus_stri/point_index.hpp"
#include "torus_stri/summation.hpp"

namespace torus {

Line Line::along(FreqPoint p, FreqPoint v) {
  const FreqPoint d = primitive_direction(v);
  return {d, dot(perp(d), p)};
}

Line Line::through(FreqPoint p, FreqPoint q) {
  if (p == q) throw ValidationError("degenerate_line", "a line needs two distinct points");
  return along(p, FreqPoint{q.x() - p.x(), q.y() - p.y()});
}

std::vector<LineIncidence> collect_lines(std::span<const FreqPoint> points, std::size_t cap) {
  std::vector<FreqPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() > cap) {
    throw CapExceeded("collect_lines_cap", "point count " + std::to_string(pts.size()) +
                                               " exceeds the line collection cap " + std::to_string(cap));
  }
  std::vector<LineIncidence> out;
  if (pts.size() < 2) return out;
  const PointIndex index(pts);
  const std::int64_t wx = index.x_hi() - index.x_lo();
  const std::int64_t wy = index.y_hi() - index.y_lo();
  constexpr std::int64_t kWalkLimit = 64;
  // Lines too long to walk back along; owned lines are remembered instead.
  std::unordered_set<Line, LineHash> long_owned;

  struct Ray {
    std::int64_t dx, dy;
    std::size_t j;
  };
  std::vector<Ray> rays;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const FreqPoint p = pts[i];
    rays.clear();
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      // pts[j] > p lexicographically, so the reduced difference is already
      // sign-normalized.
      const std::int64_t dx = pts[j].x() - p.x();
      const std::int64_t dy = pts[j].y() - p.y();
      const std::int64_t g = gcd_int(dx, dy);
      rays.push_back({dx / g, dy / g, j});
    }
    std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) {
      if (a.dx != b.dx) return a.dx < b.dx;
      if (a.dy != b.dy) return a.dy < b.dy;
      return a.j < b.j;
    });
    for (std::size_t r = 0; r < rays.size();) {
      std::size_t e = r;
      while (e < rays.size() && rays[e].dx == rays[r].dx && rays[e].dy == rays[r].dy) ++e;
      const std::int64_t dx = rays[r].dx;
      const std::int64_t dy = rays[r].dy;
      const Line line{FreqPoint{dx, dy}, -dy * p.x() + dx * p.y()};
      std::int64_t span = INT64_MAX;
      if (dx != 0) span = std::min(span, wx / dx);
      if (dy != 0) span = std::min(span, wy / (dy < 0 ? -dy : dy));
      bool owned = true;
      if (span <= kWalkLimit) {
        for (std::int64_t k = 1; k <= span; ++k) {
          if (index.find(p.x() - k * dx, p.y() - k * dy) >= 0) {
            owned = false;
            break;
          }
        }
      } else {
        owned = long_owned.insert(line).second;
      }
      if (owned) {
        LineIncidence li{line, {p}};
        for (std::size_t q = r; q < e; ++q) li.points.push_back(pts[rays[q].j]);
        out.push_back(std::move(li));
      }
      r = e;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LineIncidence& a, const LineIncidence& b) { return a.line < b.line; });
  return out;
}

double szemeredi_trotter_ratio(std::size_t m, std::size_t n, std::size_t k) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return static_cast<double>(m) / (nd * nd / (kd * kd * kd) + nd / kd);
}

RichLineReport rich_lines(std::span<const FreqPoint> points, std::size_t k) {
  if (k < 2) throw ValidationError("invalid_richness", "k must be at least 2");
  std::vector<FreqPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  RichLineReport rep{pts.size(), k, 0, 0.0, {}};
  if (k <= pts.size()) {
    for (const auto& li : collect_lines(pts)) {
      if (li.points.size() >= k) rep.lines.push_back(li.line);
    }
  }
  rep.m = rep.lines.size();
  rep.ratio = rep.n == 0 ? 0.0 : szemeredi_trotter_ratio(rep.m, rep.n, k);
  return rep;
}

std::vector<RichLineReport> rich_line_profile(std::span<const FreqPoint> points) {
  std::vector<FreqPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  std::vector<RichLineReport> out;
  if (n < 2) return out;
  std::vector<std::size_t> by_size(n + 1, 0);
  for (const auto& li : collect_lines(pts)) ++by_size[li.points.size()];
  std::size_t at_least = 0;
  std::vector<std::size_t> m(n + 2, 0);
  for (std::size_t k = n; k >= 2; --k) {
    at_least += by_size[k];
    m[k] = at_least;
  }
  for (std::size_t k = 2; k <= n; ++k) out.push_back({n, k, m[k], szemeredi_trotter_ratio(m[k], n, k), {}});
  return out;
}

bool is_rich(std::size_t count, int j, int c) {
  if (j < 0 || c < 0) throw ValidationError("invalid_richness", "j and C must be nonnegative");
  const int e = j + 2 * c;
  if (e >= 126) return false;
  const Int128 sq = static_cast<Int128>(count) * static_cast<Int128>(count);
  return sq >= (static_cast<Int128>(1) << e);
}

LineCounts::LineCounts(std::span<const FreqPoint> level) : lines_(collect_lines(level)) {
  sorted_.reserve(lines_.size());
  for (const auto& li : lines_) sorted_.emplace_back(li.line, li.points.size());
}

std::size_t LineCounts::count(const Line& line) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), line,
                             [](const std::pair<Line, std::size_t>& e, const Line& l) { return e.first < l; });
  return (it != sorted_.end() && it->first == line) ? it->second : 1;
}

std::size_t LineCounts::count_through(FreqPoint p, FreqPoint v) const { return count(Line::along(p, v)); }

int cross_type(std::size_t max_count, int j, int c) {
  if (max_count <= 1) return 3;
  return is_rich(max_count, j, c) ? 1 : 2;
}

Cross make_cross(FreqPoint p, int j, FreqPoint v, const LineCounts& counts, int c) {
  FreqPoint d1 = primitive_direction(v);
  FreqPoint d2 = primitive_direction(perp(d1));
  if (!(d1.x() > 0 && d1.y() >= 0)) std::swap(d1, d2);
  Cross x;
  x.point = p;
  x.j = j;
  x.line1 = Line::along(p, d1);
  x.line2 = Line::along(p, d2);
  x.count1 = counts.count(x.line1);
  x.count2 = counts.count(x.line2);
  const std::size_t mx = std::max(x.count1, x.count2);
  x.a = std::log2(static_cast<double>(mx));
  x.type = cross_type(mx, j, c);
  return x;
}

namespace {

class LevelLookup {
 public:
  explicit LevelLookup(const DyadicLevels& levels) {
    for (const auto& lv : levels.levels()) {
      for (const auto& p : lv.points) map_.emplace(p, lv.j);
    }
  }
  int level(FreqPoint p) const {
    auto it = map_.find(p);
    if (it == map_.end()) throw ValidationError("point_not_in_levels", "point " + to_string(p) + " is in no level");
    return it->second;
  }

 private:
  std::unordered_map<FreqPoint, int, FreqPointHash> map_;
};

struct VertexData {
  std::array<int, 4> j{};
  std::array<int, 4> a{};
  std::array<int, 4> type{};
};

VertexData vertex_data(const Parallelogram& q, const LevelLookup& lookup,
                       const std::vector<LineCounts>& counts, int c) {
  VertexData out;
  const auto& v = q.vertices();
  for (std::size_t k = 0; k < 4; ++k) {
    const FreqPoint p = v[k];
    const FreqPoint next = v[(k + 1) % 4];
    const FreqPoint prev = v[(k + 3) % 4];
    const int j = lookup.level(p);
    const auto& lc = counts[static_cast<std::size_t>(j)];
    const std::size_t c1 = lc.count_through(p, FreqPoint{next.x() - p.x(), next.y() - p.y()});
    const std::size_t c2 = lc.count_through(p, FreqPoint{prev.x() - p.x(), prev.y() - p.y()});
    const std::size_t mx = std::max(c1, c2);
    out.j[k] = j;
    out.a[k] = static_cast<int>(std::bit_width(mx)) - 1;
    out.type[k] = cross_type(mx, j, c);
  }
  return out;
}

std::vector<FreqPoint> checked_union(const DyadicLevels& levels, std::size_t cap) {
  auto pts = levels.union_points();
  if (pts.size() > cap) {
    throw CapExceeded("rectangle_bin_cap", "level union of " + std::to_string(pts.size()) +
                                               " points exceeds the rectangle enumeration cap " +
                                               std::to_string(cap));
  }
  return pts;
}

}  // namespace

std::vector<LineCounts> level_line_counts(const DyadicLevels& levels) {
  std::vector<LineCounts> out;
  out.reserve(levels.levels().size());
  for (const auto& lv : levels.levels()) out.emplace_back(lv.points);
  return out;
}

BinKey rectangle_bin_key(const DyadicLevels& levels, const std::vector<LineCounts>& counts,
                         const Parallelogram& q) {
  const LevelLookup lookup(levels);
  const auto vd = vertex_data(q, lookup, counts, levels.richness_c());
  return {vd.j, vd.a};
}

std::vector<Cross> classify_crosses(const DyadicLevels& levels) {
  const auto pts = checked_union(levels, kRectangleBinCap);
  const LevelLookup lookup(levels);
  const auto counts = level_line_counts(levels);
  const int c = levels.richness_c();
  std::map<std::pair<FreqPoint, Line>, Cross> crosses;
  auto add = [&](FreqPoint p, FreqPoint v) {
    const int j = lookup.level(p);
    Cross x = make_cross(p, j, v, counts[static_cast<std::size_t>(j)], c);
    crosses.emplace(std::pair{p, x.line1}, x);
  };
  for (const auto& p : pts) add(p, FreqPoint{1, 0});
  enumerate_rectangles(pts, [&](const Parallelogram& q) {
    const auto& v = q.vertices();
    add(v[0], FreqPoint{v[1].x() - v[0].x(), v[1].y() - v[0].y()});
  });
  std::vector<Cross> out;
  out.reserve(crosses.size());
  for (auto& [key, x] : crosses) out.push_back(x);
  return out;
}

namespace {

// Per level: rich lines of the level and, per point, how many pass through it.
struct RichIncidence {
  std::size_t rich_lines = 0;
  std::map<FreqPoint, std::size_t> through;
};

RichIncidence rich_incidence(const Level& lv, int c) {
  RichIncidence out;
  for (const auto& li : collect_lines(lv.points)) {
    if (!is_rich(li.points.size(), lv.j, c)) continue;
    ++out.rich_lines;
    for (const auto& p : li.points) ++out.through[p];
  }
  return out;
}

}  // namespace

ExceptionalSets exceptional_sets(const DyadicLevels& levels) {
  ExceptionalSets out;
  for (const auto& lv : levels.levels()) {
    const auto ri = rich_incidence(lv, levels.richness_c());
    std::vector<FreqPoint> e;
    for (const auto& [p, n] : ri.through) {
      if (n >= 2) e.push_back(p);
    }
    if (static_cast<double>(e.size()) > static_cast<double>(ri.rich_lines) * static_cast<double>(ri.rich_lines)) {
      out.bound_holds = false;
    }
    out.sets.push_back(std::move(e));
    out.rich_line_counts.push_back(ri.rich_lines);
  }
  return out;
}

std::size_t max_rich_lines_through_point(const DyadicLevels& levels) {
  std::size_t best = 0;
  for (const auto& lv : levels.levels()) {
    for (const auto& [p, n] : rich_incidence(lv, levels.richness_c()).through) best = std::max(best, n);
  }
  return best;
}

WeightedSpectrum DecompositionTrace::reconstruct() const {
  std::map<FreqPoint, CompensatedSum> acc;
  for (const auto& s : steps) {
    for (const auto& e : s.h.entries()) acc[e.point] += e.amplitude.real();
  }
  std::vector<SpectrumEntry> out;
  for (const auto& [p, v] : acc) out.push_back({p, Complex{v.value(), 0.0}});
  return WeightedSpectrum(std::move(out));
}

DecompositionTrace decompose(const WeightedSpectrum& f, int richness_c) {
  if (!f.is_nonnegative()) throw ValidationError("negative_amplitude", "decomposition requires f >= 0");
  if (richness_c < 0) throw ValidationError("invalid_richness", "C must be nonnegative");
  DecompositionTrace trace;
  trace.richness_c = richness_c;
  const double stop = 1e-12 * f.l2_norm();
  WeightedSpectrum fn = f;
  for (int n = 0; !fn.empty(); ++n) {
    if (n == kMaxDecompositionSteps) {
      trace.converged = false;
      break;
    }
    const DyadicLevels levels0 = build_levels(fn, richness_c);
    ExceptionalSets ex = exceptional_sets(levels0);
    DyadicLevels levels = levels0.without(ex.sets);
    std::vector<FreqPoint> e_all;
    for (const auto& e : ex.sets) e_all.insert(e_all.end(), e.begin(), e.end());
    WeightedSpectrum next = project(fn, PointSet(e_all));
    WeightedSpectrum h = project_complement(fn, PointSet(e_all));
    const double norm = fn.l2_norm();
    const bool halved = next.l2_norm() <= 0.5 * norm;
    trace.all_halved = trace.all_halved && halved;
    const bool stalled = next.size() == fn.size();
    trace.steps.push_back({n, norm, halved, fn, std::move(h), std::move(levels), std::move(ex)});
    if (stalled) {
      trace.converged = false;
      break;
    }
    if (next.l2_norm() <= stop) break;
    fn = std::move(next);
  }
  return trace;
}

std::vector<RectangleBin> rectangle_bins(const DyadicLevels& levels, std::size_t cap) {
  const auto pts = checked_union(levels, cap);
  const LevelLookup lookup(levels);
  const auto counts = level_line_counts(levels);
  const int c = levels.richness_c();
  struct Acc {
    std::int64_t count = 0;
    CompensatedSum gcd;
  };
  auto key_less = [](const BinKey& x, const BinKey& y) {
    return std::tie(x.j, x.a) < std::tie(y.j, y.a);
  };
  std::map<BinKey, Acc, decltype(key_less)> bins(key_less);
  enumerate_rectangles(pts, [&](const Parallelogram& q) {
    const auto vd = vertex_data(q, lookup, counts, c);
    auto& acc = bins[BinKey{vd.j, vd.a}];
    ++acc.count;
    acc.gcd += 1.0 / static_cast<double>(gcd_point(q.vertex(1) - q.vertex(4)));
  });
  std::vector<RectangleBin> out;
  out.reserve(bins.size());
  for (const auto& [key, acc] : bins) {
    RectangleBin b;
    b.j = key.j;
    b.a = key.a;
    b.count = acc.count;
    b.gcd_weighted = acc.gcd.value();
    const double cnt = static_cast<double>(acc.count);
    const int j1 = key.j[0], j2 = key.j[1];
    const int a1 = key.a[0], a2 = key.a[1], a3 = key.a[2], a4 = key.a[3];
    // 1 <= a1 < j1/2 + C  <=>  2 <= 2 a1 < j1 + 2C
    if (a1 >= 1 && 2 * a1 < j1 + 2 * c) {
      b.ratio_a2_a4 = cnt / std::exp2(2 * j1 - 2 * a1 + a2 + a4);
      b.ratio_a2_a3 = cnt / std::exp2(2 * j1 - 2 * a1 + a2 + a3);
      b.ratio_gcd = b.gcd_weighted / std::exp2(2.0 * j1 - 2.0 * a1 + a2 + 0.5 * a4);
    }
    b.ratio_j1_j2_a3 = cnt / std::exp2(j1 + j2 + a3);
    out.push_back(b);
  }
  return out;
}

BinBoundSummary summarize_bins(std::span<const RectangleBin> bins) {
  BinBoundSummary s;
  for (const auto& b : bins) {
    if (b.ratio_a2_a4) s.max_ratio_a2_a4 = std::max(s.max_ratio_a2_a4, *b.ratio_a2_a4);
    if (b.ratio_a2_a3) s.max_ratio_a2_a3 = std::max(s.max_ratio_a2_a3, *b.ratio_a2_a3);
    if (b.ratio_gcd) s.max_ratio_gcd = std::max(s.max_ratio_gcd, *b.ratio_gcd);
    s.max_ratio_j1_j2_a3 = std::max(s.max_ratio_j1_j2_a3, b.ratio_j1_j2_a3);
  }
  return s;
}

double TypeSums::ratio(int alpha, int beta) const {
  return sums[static_cast<std::size_t>(alpha - 1)][static_cast<std::size_t>(beta - 1)] / lambda_norm4;
}
double TypeSums::ratio_22_over_m() const { return sums[1][1] / (m * lambda_norm4); }
double TypeSums::ratio_gcd_22() const { return gcd_weighted_22 / lambda_norm4; }

TypeSums type_sums(const DyadicLevels& levels, const std::optional<WeightedSpectrum>& f, std::size_t cap) {
  const auto pts = checked_union(levels, cap);
  const LevelLookup lookup(levels);
  const auto counts = level_line_counts(levels);
  const int c = levels.richness_c();
  const WeightedSpectrum weights = f ? *f : levels.envelope();
  std::unordered_map<FreqPoint, double, FreqPointHash> value;
  for (const auto& e : weights.entries()) value.emplace(e.point, e.amplitude.real());
  auto fv = [&](FreqPoint p) {
    auto it = value.find(p);
    return it == value.end() ? 0.0 : it->second;
  };
  std::array<std::array<CompensatedSum, 3>, 3> sums;
  CompensatedSum gcd22, other;
  enumerate_rectangles(pts, [&](const Parallelogram& q) {
    const auto vd = vertex_data(q, lookup, counts, c);
    const auto& v = q.vertices();
    const double w = fv(v[0]) * fv(v[1]) * fv(v[2]) * fv(v[3]);
    if (vd.type[0] != vd.type[1] || vd.type[2] != vd.type[3]) {
      other += w;
      return;
    }
    const int alpha = vd.type[0];
    const int beta = vd.type[2];
    sums[static_cast<std::size_t>(alpha - 1)][static_cast<std::size_t>(beta - 1)] += w;
    if (alpha == 2 && beta == 2) gcd22 += w / static_cast<double>(gcd_point(v[0] - v[3]));
  });
  TypeSums out;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) out.sums[a][b] = sums[a][b].value();
  out.gcd_weighted_22 = gcd22.value();
  out.unclassified = other.value();
  const double l = levels.lambda_l2_norm();
  out.lambda_norm4 = l * l * l * l;
  out.m = levels.m();
  return out;
}

void write_rich_lines_csv(std::ostream& out, std::span<const RichLineReport> rows) {
  out << "n,k,m,ratio\n";
  for (const auto& r : rows) out << r.n << ',' << r.k << ',' << r.m << ',' << format_double(r.ratio) << '\n';
}

void write_bins_csv(std::ostream& out, std::span<const RectangleBin> bins) {
  out << "j1,j2,j3,j4,a1,a2,a3,a4,count,gcd_weighted\n";
  for (const auto& b : bins) {
    for (int v : b.j) out << v << ',';
    for (int v : b.a) out << v << ',';
    out << b.count << ',' << format_double(b.gcd_weighted) << '\n';
  }
}

void write_decomposition_csv(std::ostream& out, const DecompositionTrace& trace) {
  out << "n,l2_norm,halved\n";
  for (const auto& s : trace.steps) {
    out << s.n << ',' << format_double(s.l2_norm) << ',' << (s.halved ? "true" : "false") << '\n';
  }
}

}  // namespace torus
