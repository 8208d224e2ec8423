#include "torus_stri/quadruple.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include "torus_stri/parallel.hpp"
#include "torus_stri/point_index.hpp"
#include "torus_stri/summation.hpp"

namespace torus {

Parallelogram::Parallelogram(FreqPoint xi1, FreqPoint xi2, FreqPoint xi3, FreqPoint xi4)
    : v_{xi1, xi2, xi3, xi4} {
  if (xi1.x() + xi3.x() != xi2.x() + xi4.x() || xi1.y() + xi3.y() != xi2.y() + xi4.y()) {
    throw ValidationError("not_a_parallelogram", "xi1 + xi3 must equal xi2 + xi4");
  }
  sigma_ = (xi1.norm2() + xi3.norm2()) - (xi2.norm2() + xi4.norm2());
}

Parallelogram Parallelogram::from_corner(FreqPoint xi1, FreqPoint xi2, FreqPoint xi4) {
  return Parallelogram(xi1, xi2, xi2 + xi4 - xi1, xi4);
}

bool Parallelogram::distinct_vertices() const {
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (v_[static_cast<std::size_t>(a)] == v_[static_cast<std::size_t>(b)]) return false;
  return true;
}

namespace {

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw CapExceeded("generic_cap", "support size " + std::to_string(n) +
                                         " exceeds the generic enumeration cap " + std::to_string(cap));
  }
}

// Overlap length of {x - 0, x - a, x - b, x - a - b} sliding in [0, len).
std::int64_t overlap(std::int64_t len, std::int64_t a, std::int64_t b) {
  const std::int64_t hi = std::max({std::int64_t{0}, a, b, a + b});
  const std::int64_t lo = std::min({std::int64_t{0}, a, b, a + b});
  return std::max<std::int64_t>(0, len - (hi - lo));
}

struct SigmaAccumulator {
  std::int64_t count = 0;
  CompensatedComplexSum weight;
};

struct PartialBin {
  std::int64_t sigma;
  std::int64_t count;
  CompensatedComplexSum weight;
};

// Accumulates (sigma, weight) pairs, densely when the sigma range is small.
class BlockAccumulator {
 public:
  static constexpr std::int64_t kDenseRange = std::int64_t{1} << 16;

  explicit BlockAccumulator(std::int64_t sigma_bound)
      : bound_(sigma_bound), dense_(2 * sigma_bound + 1 <= kDenseRange) {
    if (dense_) table_.resize(static_cast<std::size_t>(2 * bound_ + 1));
  }

  void add(std::int64_t sigma, Complex w) {
    SigmaAccumulator* acc;
    if (dense_) {
      acc = &table_[static_cast<std::size_t>(sigma + bound_)];
      if (acc->count == 0) touched_.push_back(sigma);
    } else {
      acc = &map_[sigma];
      if (acc->count == 0) touched_.push_back(sigma);
    }
    ++acc->count;
    acc->weight += w;
  }

  std::vector<PartialBin> take() {
    std::sort(touched_.begin(), touched_.end());
    std::vector<PartialBin> out;
    out.reserve(touched_.size());
    for (std::int64_t s : touched_) {
      SigmaAccumulator& acc = dense_ ? table_[static_cast<std::size_t>(s + bound_)] : map_[s];
      out.push_back({s, acc.count, acc.weight});
      acc = SigmaAccumulator{};
    }
    touched_.clear();
    map_.clear();
    return out;
  }

 private:
  std::int64_t bound_;
  bool dense_;
  std::vector<SigmaAccumulator> table_;
  std::unordered_map<std::int64_t, SigmaAccumulator> map_;
  std::vector<std::int64_t> touched_;
};

constexpr std::size_t kBlockSize = 8;

SigmaHistogram generic_histogram(const WeightedSpectrum& f, std::size_t cap) {
  const std::size_t n = f.size();
  check_cap(n, cap);
  if (n == 0) return {};
  const auto entries = f.entries();
  std::vector<FreqPoint> pts;
  std::vector<Complex> amp;
  std::vector<std::int64_t> n2;
  pts.reserve(n);
  for (const auto& e : entries) {
    pts.push_back(e.point);
    amp.push_back(e.amplitude);
    n2.push_back(e.point.norm2());
  }
  const PointIndex index(pts);
  const auto [mn, mx] = std::minmax_element(n2.begin(), n2.end());
  const std::int64_t sigma_bound = 2 * (*mx - *mn);

  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<PartialBin>> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    BlockAccumulator acc(sigma_bound);
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i1 = b * kBlockSize; i1 < end; ++i1) {
      const std::int64_t x1 = pts[i1].x();
      const std::int64_t y1 = pts[i1].y();
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        const Complex w12 = amp[i1] * std::conj(amp[i2]);
        const std::int64_t dx = pts[i2].x() - x1;
        const std::int64_t dy = pts[i2].y() - y1;
        for (std::size_t i4 = 0; i4 < n; ++i4) {
          const std::int32_t i3 = index.find(pts[i4].x() + dx, pts[i4].y() + dy);
          if (i3 < 0) continue;
          const std::int64_t sigma = (n2[i1] + n2[static_cast<std::size_t>(i3)]) - (n2[i2] + n2[i4]);
          acc.add(sigma, w12 * (amp[static_cast<std::size_t>(i3)] * std::conj(amp[i4])));
        }
      }
    }
    partial[b] = acc.take();
  });

  std::map<std::int64_t, SigmaAccumulator> merged;
  for (const auto& block : partial) {
    for (const auto& pb : block) {
      auto& m = merged[pb.sigma];
      m.count += pb.count;
      m.weight += pb.weight;
    }
  }
  std::vector<SigmaBin> bins;
  bins.reserve(merged.size());
  for (const auto& [s, m] : merged) bins.push_back({s, m.count, m.weight.value()});
  return SigmaHistogram(std::move(bins));
}

}  // namespace

void enumerate_parallelograms(std::span<const FreqPoint> points,
                              const std::function<void(const Parallelogram&)>& visit,
                              std::size_t cap) {
  check_cap(points.size(), cap);
  std::vector<FreqPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const PointIndex index(pts);
  for (const auto& p1 : pts) {
    for (const auto& p2 : pts) {
      for (const auto& p4 : pts) {
        const std::int32_t i3 = index.find(p2.x() + p4.x() - p1.x(), p2.y() + p4.y() - p1.y());
        if (i3 < 0) continue;
        visit(Parallelogram(p1, p2, pts[static_cast<std::size_t>(i3)], p4));
      }
    }
  }
}

void enumerate_box_classes(const Box& box,
                           const std::function<void(const ParallelogramClass&)>& visit) {
  const std::int64_t w = box.width();
  const std::int64_t h = box.height();
  if (w <= 0 || h <= 0) return;
  for (std::int64_t ax = -(w - 1); ax <= w - 1; ++ax) {
    for (std::int64_t bx = -(w - 1); bx <= w - 1; ++bx) {
      const std::int64_t cx = overlap(w, ax, bx);
      if (cx == 0) continue;
      for (std::int64_t ay = -(h - 1); ay <= h - 1; ++ay) {
        for (std::int64_t by = -(h - 1); by <= h - 1; ++by) {
          const std::int64_t cy = overlap(h, ay, by);
          if (cy == 0) continue;
          visit({FreqPoint{ax, ay}, FreqPoint{bx, by}, 2 * (ax * bx + ay * by), cx * cy});
        }
      }
    }
  }
}

Int128 additive_energy(std::span<const FreqPoint> points) {
  std::vector<FreqPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::unordered_map<FreqPoint, std::int64_t, FreqPointHash> reps;
  reps.reserve(pts.size() * pts.size());
  for (const auto& p : pts)
    for (const auto& q : pts) ++reps[FreqPoint{p.x() + q.x(), p.y() + q.y()}];
  Int128 e = 0;
  for (const auto& [eta, r] : reps) e += static_cast<Int128>(r) * r;
  return e;
}

SigmaHistogram::SigmaHistogram(std::vector<SigmaBin> bins) : bins_(std::move(bins)) {
  std::sort(bins_.begin(), bins_.end(),
            [](const SigmaBin& a, const SigmaBin& b) { return a.sigma < b.sigma; });
  std::erase_if(bins_, [](const SigmaBin& b) { return b.count == 0; });
}

Int128 SigmaHistogram::total_count() const {
  Int128 total = 0;
  for (const auto& b : bins_) total += b.count;
  return total;
}

std::vector<TauBin> SigmaHistogram::tau_view() const {
  std::map<std::int64_t, std::pair<Int128, CompensatedSum>> by_tau;
  for (const auto& b : bins_) {
    auto& slot = by_tau[b.sigma < 0 ? -b.sigma : b.sigma];
    slot.first += b.count;
    slot.second += b.weight.real();
  }
  std::vector<TauBin> out;
  out.reserve(by_tau.size());
  for (const auto& [tau, slot] : by_tau) out.push_back({tau, slot.first, slot.second.value()});
  return out;
}

std::vector<DyadicBin> SigmaHistogram::dyadic_view() const {
  std::map<std::int64_t, std::pair<Int128, CompensatedSum>> by_m;
  for (const auto& t : tau_view()) {
    std::int64_t m = 0;
    if (t.tau > 0) {
      m = 1;
      while (m * 2 <= t.tau) m *= 2;
    }
    auto& slot = by_m[m];
    slot.first += t.count;
    slot.second += t.weighted_sum;
  }
  std::vector<DyadicBin> out;
  for (const auto& [m, slot] : by_m) out.push_back({m, slot.first, slot.second.value()});
  return out;
}

double SigmaHistogram::weighted_sum_tau_range(std::int64_t lo, std::int64_t hi) const {
  CompensatedSum s;
  for (const auto& b : bins_) {
    const std::int64_t tau = b.sigma < 0 ? -b.sigma : b.sigma;
    if (tau >= lo && tau < hi) s += b.weight.real();
  }
  return s.value();
}

bool operator==(const SigmaHistogram& a, const SigmaHistogram& b) {
  return std::equal(a.bins_.begin(), a.bins_.end(), b.bins_.begin(), b.bins_.end(),
                    [](const SigmaBin& x, const SigmaBin& y) {
                      return x.sigma == y.sigma && x.count == y.count && x.weight == y.weight;
                    });
}

std::optional<Box> as_uniform_box(const WeightedSpectrum& f) {
  if (f.empty()) return std::nullopt;
  const auto e = f.entries();
  Box box{e.front().point.x(), e.back().point.x(), e.front().point.y(), e.front().point.y()};
  for (const auto& x : e) {
    box.y_lo = std::min(box.y_lo, x.point.y());
    box.y_hi = std::max(box.y_hi, x.point.y());
    if (x.amplitude != e.front().amplitude) return std::nullopt;
  }
  if (static_cast<std::int64_t>(e.size()) != box.width() * box.height()) return std::nullopt;
  return box;
}

SigmaHistogram box_sigma_histogram(const Box& box) {
  const std::int64_t w = box.width();
  const std::int64_t h = box.height();
  if (w <= 0 || h <= 0) return {};
  constexpr std::int64_t kMaxSide = 257;
  if (w > kMaxSide || h > kMaxSide) {
    throw CapExceeded("grid_fast_cap", "grid-fast histogram supports box sides up to " +
                                           std::to_string(kMaxSide));
  }
  // table[p] = sum of overlap(len, a, b) over a*b = p.
  auto table = [](std::int64_t len) {
    const std::int64_t r = (len - 1) * (len - 1);
    std::vector<std::int64_t> t(static_cast<std::size_t>(2 * r + 1), 0);
    for (std::int64_t a = -(len - 1); a <= len - 1; ++a)
      for (std::int64_t b = -(len - 1); b <= len - 1; ++b) {
        const std::int64_t c = overlap(len, a, b);
        if (c != 0) t[static_cast<std::size_t>(a * b + r)] += c;
      }
    return std::pair{t, r};
  };
  const auto [tx, rx] = table(w);
  const auto [ty, ry] = table(h);
  std::vector<std::pair<std::int64_t, std::int64_t>> sparse_y;
  for (std::size_t q = 0; q < ty.size(); ++q)
    if (ty[q] != 0) sparse_y.emplace_back(static_cast<std::int64_t>(q) - ry, ty[q]);

  std::vector<Int128> conv(static_cast<std::size_t>(2 * (rx + ry) + 1), 0);
  for (std::size_t p = 0; p < tx.size(); ++p) {
    if (tx[p] == 0) continue;
    const std::int64_t pv = static_cast<std::int64_t>(p) - rx;
    for (const auto& [qv, cy] : sparse_y) {
      conv[static_cast<std::size_t>(pv + qv + rx + ry)] += static_cast<Int128>(tx[p]) * cy;
    }
  }
  std::vector<SigmaBin> bins;
  for (std::size_t k = 0; k < conv.size(); ++k) {
    if (conv[k] == 0) continue;
    const std::int64_t dot_value = static_cast<std::int64_t>(k) - (rx + ry);
    bins.push_back({2 * dot_value, conv[k], Complex{static_cast<double>(conv[k]), 0.0}});
  }
  return SigmaHistogram(std::move(bins));
}

Int128 box_rectangle_count(const Box& box) {
  const std::int64_t w = box.width();
  const std::int64_t h = box.height();
  if (w <= 0 || h <= 0) return 0;
  Int128 total = 0;
  // v = 0: every w contributes.
  for (std::int64_t bx = -(w - 1); bx <= w - 1; ++bx)
    for (std::int64_t by = -(h - 1); by <= h - 1; ++by)
      total += static_cast<Int128>(overlap(w, 0, bx)) * overlap(h, 0, by);
  for (std::int64_t vx = -(w - 1); vx <= w - 1; ++vx) {
    for (std::int64_t vy = -(h - 1); vy <= h - 1; ++vy) {
      if (vx == 0 && vy == 0) continue;
      const std::int64_t g = gcd_int(vx, vy);
      const std::int64_t ux = -vy / g;
      const std::int64_t uy = vx / g;
      // k = 0 (w = 0) and k != 0 along the primitive perpendicular.
      for (std::int64_t k = 0;; ++k) {
        const std::int64_t cx = overlap(w, vx, k * ux);
        const std::int64_t cy = overlap(h, vy, k * uy);
        if (cx == 0 || cy == 0) break;
        total += static_cast<Int128>(cx) * cy;
      }
      for (std::int64_t k = -1;; --k) {
        const std::int64_t cx = overlap(w, vx, k * ux);
        const std::int64_t cy = overlap(h, vy, k * uy);
        if (cx == 0 || cy == 0) break;
        total += static_cast<Int128>(cx) * cy;
      }
    }
  }
  return total;
}

SigmaHistogram sigma_histogram(const WeightedSpectrum& f, const EnumerationOptions& options) {
  if (options.backend == Backend::kGridFast) {
    const auto box = as_uniform_box(f);
    if (!box) {
      throw ValidationError("grid_fast_requires_box",
                            "grid-fast backend requires a constant amplitude on a full box");
    }
    const double w4 = std::norm(f.entries().front().amplitude) * std::norm(f.entries().front().amplitude);
    auto hist = box_sigma_histogram(*box);
    std::vector<SigmaBin> bins = hist.bins();
    for (auto& b : bins) b.weight = Complex{static_cast<double>(b.count) * w4, 0.0};
    return SigmaHistogram(std::move(bins));
  }
  return generic_histogram(f, options.cap);
}

SigmaHistogram sigma_histogram(std::span<const FreqPoint> points, const EnumerationOptions& options) {
  return sigma_histogram(WeightedSpectrum::indicator(points), options);
}

Complex time_kernel(std::int64_t sigma, double t0, double t1) {
  if (sigma == 0) return {t1 - t0, 0.0};
  const double s = static_cast<double>(sigma);
  const double mid = 0.5 * (t0 + t1);
  const double half = 0.5 * (t1 - t0);
  const double amplitude = 2.0 * std::sin(s * half) / s;
  return {amplitude * std::cos(s * mid), -amplitude * std::sin(s * mid)};
}

double l4_time_integral(const SigmaHistogram& hist, double t0, double t1) {
  CompensatedSum s;
  for (const auto& b : hist.bins()) {
    const Complex k = time_kernel(b.sigma, t0, t1);
    s += b.weight.real() * k.real() - b.weight.imag() * k.imag();
  }
  constexpr double kTorusArea = 4.0 * std::numbers::pi * std::numbers::pi;
  return kTorusArea * s.value();
}

double l4_time_integral(const SigmaHistogram& hist, double horizon) {
  if (!(horizon > 0.0)) throw ValidationError("invalid_horizon", "time horizon must be positive");
  return l4_time_integral(hist, 0.0, horizon);
}

double l4_time_integral(const WeightedSpectrum& f, double horizon, const EnumerationOptions& options) {
  if (!(horizon > 0.0)) throw ValidationError("invalid_horizon", "time horizon must be positive");
  return l4_time_integral(sigma_histogram(f, options), horizon);
}

double averaged_kernel(std::int64_t tau, double t0) {
  if (tau == 0) return 2.0 * t0;
  const double t = static_cast<double>(tau);
  const double s = std::sin(t0 * t);
  return 2.0 * s * s / (t0 * t * t);
}

double averaged_kernel_sum(const SigmaHistogram& hist, double t0) {
  CompensatedSum s;
  for (const auto& b : hist.bins()) s += b.weight.real() * averaged_kernel(b.sigma < 0 ? -b.sigma : b.sigma, t0);
  return s.value();
}

double averaged_kernel_sum(const WeightedSpectrum& f, double t0, const EnumerationOptions& options) {
  if (!(t0 > 0.0)) throw ValidationError("invalid_horizon", "T0 must be positive");
  return averaged_kernel_sum(sigma_histogram(f, options), t0);
}

double gcd_window_fraction(std::int64_t g, std::int64_t m) {
  if (g <= 0 || m <= 0) throw ValidationError("invalid_argument", "g and M must be positive");
  const std::int64_t multiples = (2 * m - 1) / g - (m - 1) / g;
  return static_cast<double>(multiples) / static_cast<double>(m);
}

GcdFilteredAverage gcd_filtered_average(const WeightedSpectrum& f, std::int64_t m, std::size_t cap) {
  if (!is_dyadic(m)) throw ValidationError("not_dyadic", "M must be a power of two");
  if (!f.is_nonnegative()) throw ValidationError("negative_amplitude", "f must be nonnegative");
  GcdFilteredAverage out;
  out.direct = sigma_histogram(f, {Backend::kGeneric, cap}).weighted_sum_tau_range(m, 2 * m) /
               static_cast<double>(m);

  // Q <-> segments (xi1, xi4) and (xi2, xi3) sharing d = xi1 - xi4;
  // tau = 2 |xi1.d - xi2.d|.
  const auto e = f.entries();
  std::map<FreqPoint, std::map<std::int64_t, CompensatedSum>> by_edge;
  for (const auto& p : e)
    for (const auto& q : e) {
      if (p.point == q.point) continue;
      const FreqPoint d = p.point - q.point;
      by_edge[d][dot(p.point, d)] += p.amplitude.real() * q.amplitude.real();
    }
  CompensatedSum total;
  for (const auto& [d, levels] : by_edge) {
    std::vector<std::pair<std::int64_t, double>> a;
    for (const auto& [s, w] : levels) a.emplace_back(s, w.value());
    for (const auto& [s1, w1] : a)
      for (const auto& [s2, w2] : a) {
        const std::int64_t tau = 2 * (s1 > s2 ? s1 - s2 : s2 - s1);
        if (tau >= m && tau < 2 * m) total += w1 * w2;
      }
  }
  out.via_segments = total.value() / static_cast<double>(m);
  return out;
}

void enumerate_rectangles(std::span<const FreqPoint> points,
                          const std::function<void(const Parallelogram&)>& visit) {
  std::vector<FreqPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 4) return;
  const PointIndex index(pts);
  // k-range keeping p + k u inside [lo, hi] in one coordinate.
  auto k_range = [](std::int64_t p, std::int64_t u, std::int64_t lo, std::int64_t hi,
                    std::int64_t& kmin, std::int64_t& kmax) {
    if (u == 0) {
      if (p < lo || p > hi) { kmin = 1; kmax = 0; }
      return;
    }
    auto floor_div = [](std::int64_t a, std::int64_t b) {
      std::int64_t q = a / b;
      if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
      return q;
    };
    auto ceil_div = [&](std::int64_t a, std::int64_t b) { return -floor_div(-a, b); };
    std::int64_t a = u > 0 ? ceil_div(lo - p, u) : ceil_div(hi - p, u);
    std::int64_t b = u > 0 ? floor_div(hi - p, u) : floor_div(lo - p, u);
    kmin = std::max(kmin, a);
    kmax = std::min(kmax, b);
  };
  for (const auto& p1 : pts) {
    for (const auto& p2 : pts) {
      if (p1 == p2) continue;
      const std::int64_t vx = p2.x() - p1.x();
      const std::int64_t vy = p2.y() - p1.y();
      const std::int64_t g = gcd_int(vx, vy);
      const std::int64_t ux = -vy / g;
      const std::int64_t uy = vx / g;
      std::int64_t kmin = INT64_MIN / 4;
      std::int64_t kmax = INT64_MAX / 4;
      k_range(p1.x(), ux, index.x_lo(), index.x_hi(), kmin, kmax);
      k_range(p1.y(), uy, index.y_lo(), index.y_hi(), kmin, kmax);
      k_range(p2.x(), ux, index.x_lo(), index.x_hi(), kmin, kmax);
      k_range(p2.y(), uy, index.y_lo(), index.y_hi(), kmin, kmax);
      for (std::int64_t k = kmin; k <= kmax; ++k) {
        if (k == 0) continue;
        const std::int32_t i4 = index.find(p1.x() + k * ux, p1.y() + k * uy);
        if (i4 < 0) continue;
        const std::int32_t i3 = index.find(p2.x() + k * ux, p2.y() + k * uy);
        if (i3 < 0) continue;
        visit(Parallelogram(p1, p2, pts[static_cast<std::size_t>(i3)], pts[static_cast<std::size_t>(i4)]));
      }
    }
  }
}

void write_tau_csv(std::ostream& out, const SigmaHistogram& hist) {
  out << "tau,count,weighted_sum\n";
  for (const auto& t : hist.tau_view()) {
    out << t.tau << ',' << format_int128(t.count) << ',' << format_double(t.weighted_sum) << '\n';
  }
}

void write_dyadic_csv(std::ostream& out, const SigmaHistogram& hist) {
  out << "M,count,weighted_sum\n";
  for (const auto& d : hist.dyadic_view()) {
    out << d.m << ',' << format_int128(d.count) << ',' << format_double(d.weighted_sum) << '\n';
  }
}

}  // namespace torus
