#include "torus_stri/propagator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>

#include "torus_stri/fft.hpp"
#include "torus_stri/format.hpp"
#include "torus_stri/parallel.hpp"
#include "torus_stri/summation.hpp"

namespace torus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTorusArea = kTwoPi * kTwoPi;

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

void check_grid(const WeightedSpectrum& f, std::size_t n) {
  if (n == 0 || n % 2 == 0) throw ValidationError("invalid_grid", "grid size must be odd");
  const auto k = static_cast<std::size_t>(f.max_abs_component());
  if (n < 2 * k + 1) {
    throw ValidationError("aliasing", "grid of " + std::to_string(n) + " points cannot resolve frequency " +
                                          std::to_string(k));
  }
}

}  // namespace

WeightedSpectrum evolve(const WeightedSpectrum& f, double t) {
  std::vector<SpectrumEntry> out(f.entries().begin(), f.entries().end());
  for (auto& e : out) e.amplitude *= unit_phase(-t * static_cast<double>(e.point.norm2()));
  return WeightedSpectrum(std::move(out));
}

PhysicalGrid sample_physical(const WeightedSpectrum& f, std::size_t n, Synthesis method) {
  check_grid(f, n);
  PhysicalGrid g{n, std::vector<Complex>(n * n)};
  if (method == Synthesis::kFft) {
    for (const auto& e : f.entries()) {
      g.samples[mode_index(e.point.x(), n) * n + mode_index(e.point.y(), n)] = e.amplitude;
    }
    Fft2d fft(n);
    fft.backward(g.samples);
    return g;
  }
  // Direct synthesis with the phase index reduced exactly modulo n.
  const auto nn = static_cast<std::int64_t>(n);
  std::vector<Complex> roots(n);
  for (std::size_t r = 0; r < n; ++r) roots[r] = unit_phase(kTwoPi * static_cast<double>(r) / static_cast<double>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      CompensatedComplexSum s;
      for (const auto& e : f.entries()) {
        std::int64_t r = (e.point.x() * static_cast<std::int64_t>(a) + e.point.y() * static_cast<std::int64_t>(b)) % nn;
        if (r < 0) r += nn;
        s += e.amplitude * roots[static_cast<std::size_t>(r)];
      }
      g.samples[a * n + b] = s.value();
    }
  }
  return g;
}

WeightedSpectrum analyze(const PhysicalGrid& grid, double drop_below) {
  const std::size_t n = grid.n;
  std::vector<Complex> data = grid.samples;
  Fft2d fft(n);
  fft.forward(data);
  const double scale = 1.0 / static_cast<double>(n * n);
  std::vector<SpectrumEntry> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Complex v = data[a * n + b] * scale;
      if (std::abs(v) <= drop_below) continue;
      out.push_back({FreqPoint{signed_mode(a, n), signed_mode(b, n)}, v});
    }
  }
  return WeightedSpectrum(std::move(out));
}

std::size_t quartic_grid_size(const WeightedSpectrum& f) {
  return smooth_odd_size(4 * static_cast<std::size_t>(f.max_abs_component()) + 1);
}

double spatial_integral_abs_pow(const PhysicalGrid& grid, int q) {
  CompensatedSum s;
  for (const auto& v : grid.samples) {
    const double m2 = std::norm(v);
    s += q == 4 ? m2 * m2 : (q == 2 ? m2 : std::pow(m2, 0.5 * q));
  }
  return kTorusArea * s.value() / static_cast<double>(grid.samples.size());
}

GaussRule gauss_legendre(std::size_t points) {
  if (points == 0) throw ValidationError("invalid_rule", "Gauss rule needs at least one point");
  const std::size_t n = points;
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence: p1 = P_n(z), p2 = P_{n-1}(z).
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * static_cast<double>(j) - 1.0) * z * p2 - (static_cast<double>(j) - 1.0) * p3) /
             static_cast<double>(j);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / pp;
      z -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

std::size_t default_panel_count(const WeightedSpectrum& f, double t0, double t1) {
  if (f.empty()) return 1;
  std::int64_t lo = INT64_MAX, hi = 0;
  for (const auto& e : f.entries()) {
    lo = std::min(lo, e.point.norm2());
    hi = std::max(hi, e.point.norm2());
  }
  const double sigma_max = 2.0 * static_cast<double>(hi - lo);
  const double nodes = kNodesPerPeriod * sigma_max * std::fabs(t1 - t0) / kTwoPi;
  const auto panels = static_cast<std::size_t>(std::ceil(nodes / static_cast<double>(kGaussPointsPerPanel)));
  return std::max<std::size_t>(1, panels);
}

namespace {

double quadrature_pass(const WeightedSpectrum& f, double t0, double t1, std::size_t panels, std::size_t n) {
  const GaussRule rule = gauss_legendre(kGaussPointsPerPanel);
  const std::size_t p = kGaussPointsPerPanel;
  const std::size_t total = panels * p;
  const double h = (t1 - t0) / static_cast<double>(panels);
  std::vector<double> values(total, 0.0);
  std::vector<std::size_t> slot;
  std::vector<double> norm2;
  for (const auto& e : f.entries()) {
    slot.push_back(mode_index(e.point.x(), n) * n + mode_index(e.point.y(), n));
    norm2.push_back(static_cast<double>(e.point.norm2()));
  }
  constexpr std::size_t kBlock = 32;
  const std::size_t blocks = (total + kBlock - 1) / kBlock;
  const auto entries = f.entries();
  parallel_for(blocks, [&](std::size_t blk) {
    Fft2d fft(n);
    std::vector<Complex> grid(n * n);
    const std::size_t end = std::min(total, (blk + 1) * kBlock);
    for (std::size_t idx = blk * kBlock; idx < end; ++idx) {
      const std::size_t panel = idx / p;
      const std::size_t node = idx % p;
      const double t = t0 + h * (static_cast<double>(panel) + 0.5 * (1.0 + rule.nodes[node]));
      std::fill(grid.begin(), grid.end(), Complex{});
      for (std::size_t e = 0; e < entries.size(); ++e) {
        grid[slot[e]] = entries[e].amplitude * unit_phase(-t * norm2[e]);
      }
      fft.backward(grid);
      CompensatedSum s;
      for (const auto& v : grid) {
        const double m2 = std::norm(v);
        s += m2 * m2;
      }
      values[idx] = 0.5 * h * rule.weights[node] * kTorusArea * s.value() / static_cast<double>(n * n);
    }
  });
  CompensatedSum total_sum;
  for (double v : values) total_sum += v;
  return total_sum.value();
}

}  // namespace

QuadratureResult l4_quadrature(const WeightedSpectrum& f, double t0, double t1, const QuadratureOptions& options) {
  if (!(t1 >= t0)) throw ValidationError("invalid_horizon", "interval must satisfy t0 <= t1");
  QuadratureResult r;
  r.panels = options.panels ? options.panels : default_panel_count(f, t0, t1);
  r.grid = options.grid ? options.grid : quartic_grid_size(f);
  check_grid(f, r.grid);
  if (f.empty() || t1 == t0) return r;
  r.value = quadrature_pass(f, t0, t1, r.panels, r.grid);
  if (options.error_estimate) {
    const std::size_t coarse = std::max<std::size_t>(1, (r.panels + 1) / 2);
    r.error_estimate = coarse == r.panels ? 0.0 : std::fabs(r.value - quadrature_pass(f, t0, t1, coarse, r.grid));
  }
  return r;
}

QuadratureResult l4_quadrature(const WeightedSpectrum& f, double horizon, const QuadratureOptions& options) {
  if (!(horizon > 0.0)) throw ValidationError("invalid_horizon", "time horizon must be positive");
  return l4_quadrature(f, 0.0, horizon, options);
}

std::string to_string(StrichartzMethod m) {
  switch (m) {
    case StrichartzMethod::kAuto: return "auto";
    case StrichartzMethod::kExact: return "exact";
    case StrichartzMethod::kQuadrature: return "quadrature";
  }
  return "auto";
}

StrichartzMethod parse_strichartz_method(const std::string& name) {
  if (name == "auto") return StrichartzMethod::kAuto;
  if (name == "exact") return StrichartzMethod::kExact;
  if (name == "quadrature") return StrichartzMethod::kQuadrature;
  throw ValidationError("invalid_method", "unknown method '" + name + "' (auto|exact|quadrature)");
}

double local_horizon(std::size_t support_size) {
  return 1.0 / log_floor1(static_cast<double>(support_size));
}

namespace {

constexpr std::int64_t kGridFastMaxSide = 257;

bool fits_grid_fast(const std::optional<Box>& box) {
  return box && box->width() <= kGridFastMaxSide && box->height() <= kGridFastMaxSide;
}

}  // namespace

StrichartzReport strichartz_ratio(const WeightedSpectrum& f, double horizon, StrichartzMethod method,
                                  const std::string& descriptor) {
  if (f.empty()) throw ValidationError("empty_spectrum", "empty spectrum");
  if (!(horizon > 0.0)) throw ValidationError("invalid_horizon", "time horizon must be positive");
  StrichartzReport rep;
  rep.set = descriptor;
  rep.support = f.size();
  rep.horizon = horizon;
  double quartic = 0.0;
  const auto box = as_uniform_box(f);
  const bool use_grid_fast = fits_grid_fast(box);
  if (method == StrichartzMethod::kAuto) {
    method = (use_grid_fast || f.size() <= kAutoGenericLimit) ? StrichartzMethod::kExact : StrichartzMethod::kQuadrature;
  }
  if (method == StrichartzMethod::kExact) {
    if (use_grid_fast) {
      quartic = l4_time_integral(f, horizon, {Backend::kGridFast, kDefaultGenericCap});
      rep.method = "exact-grid-fast";
    } else {
      quartic = l4_time_integral(f, horizon, {Backend::kGeneric, kDefaultGenericCap});
      rep.method = "exact-generic";
    }
  } else {
    const auto q = l4_quadrature(f, horizon);
    quartic = q.value;
    rep.error_estimate = q.error_estimate;
    rep.method = "quadrature";
  }
  rep.l4 = std::pow(std::max(quartic, 0.0), 0.25);
  rep.l2 = kTwoPi * f.l2_norm();
  rep.ratio = rep.l4 / rep.l2;
  return rep;
}

StrichartzReport strichartz_ratio(std::span<const FreqPoint> points) {
  const auto f = WeightedSpectrum::indicator(points);
  return strichartz_ratio(f, local_horizon(f.size()));
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_scan_n(std::int64_t n) {
  if (n < 1) throw ValidationError("invalid_argument", "scan sizes must be positive");
}

}  // namespace

std::vector<ScanRow> extremizer_scan(std::span<const std::int64_t> n_list, bool timing) {
  std::vector<ScanRow> rows;
  for (std::int64_t n : n_list) {
    check_scan_n(n);
    const auto start = std::chrono::steady_clock::now();
    const Int128 e0 = box_rectangle_count(Box::centered(n));
    const double support = static_cast<double>((2 * n + 1) * (2 * n + 1));
    const double quartic = kTwoPi * kTorusArea * static_cast<double>(e0);
    ScanRow r;
    r.n = n;
    r.horizon = kTwoPi;
    r.l4 = std::pow(quartic, 0.25);
    r.l2 = kTwoPi * std::sqrt(support);
    r.ratio = r.l4 / r.l2;
    r.ratio4_over_log_n = static_cast<double>(e0) / (kTwoPi * support * support) / log_floor1(static_cast<double>(n));
    r.method = "exact-rectangle-count";
    if (timing) r.seconds = seconds_since(start);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ScanRow> local_scan(std::span<const std::int64_t> n_list, StrichartzMethod method, bool timing) {
  std::vector<ScanRow> rows;
  for (std::int64_t n : n_list) {
    check_scan_n(n);
    const auto start = std::chrono::steady_clock::now();
    const auto f = WeightedSpectrum::indicator(Box::centered(n).points());
    const auto rep = strichartz_ratio(f, local_horizon(f.size()), method, "grid:" + std::to_string(n));
    ScanRow r;
    r.n = n;
    r.horizon = rep.horizon;
    r.l4 = rep.l4;
    r.l2 = rep.l2;
    r.ratio = rep.ratio;
    const double r2 = rep.ratio * rep.ratio;
    r.ratio4_over_log_n = r2 * r2 / log_floor1(static_cast<double>(n));
    r.method = rep.method;
    if (timing) r.seconds = seconds_since(start);
    rows.push_back(r);
  }
  return rows;
}

void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows) {
  out << "N,T,l4,l2,ratio,ratio4_over_logN,method,seconds\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.horizon) << ',' << format_double(r.l4) << ',' << format_double(r.l2)
        << ',' << format_double(r.ratio) << ',' << format_double(r.ratio4_over_log_n) << ',' << r.method << ','
        << format_double(r.seconds) << '\n';
  }
}

CubeLocalReport cube_local_check(const PiecewiseFree& u, const Cube& cube) {
  if (u.pieces.empty() || u.breakpoints.size() != u.pieces.size() + 1) {
    throw ValidationError("invalid_atom", "need J pieces and J+1 breakpoints");
  }
  for (std::size_t i = 1; i < u.breakpoints.size(); ++i) {
    if (!(u.breakpoints[i] > u.breakpoints[i - 1])) {
      throw ValidationError("invalid_atom", "breakpoints must be strictly increasing");
    }
  }
  const double length = u.breakpoints.back() - u.breakpoints.front();
  const double limit = 1.0 / log_floor1(static_cast<double>(cube.size));
  if (length > limit * (1.0 + 1e-12)) {
    throw ValidationError("interval_too_long", "interval longer than 1/log N");
  }
  CompensatedSum quartic, fourth;
  for (std::size_t j = 0; j < u.pieces.size(); ++j) {
    const auto local = project(u.pieces[j], cube);
    const auto hist = sigma_histogram(local);
    quartic += l4_time_integral(hist, u.breakpoints[j], u.breakpoints[j + 1]);
    const double l2 = kTwoPi * u.pieces[j].l2_norm();
    fourth += l2 * l2 * l2 * l2;
  }
  CubeLocalReport rep;
  rep.l4 = std::pow(std::max(quartic.value(), 0.0), 0.25);
  rep.denominator = std::pow(fourth.value(), 0.25);
  rep.ratio = rep.denominator > 0.0 ? rep.l4 / rep.denominator : 0.0;
  return rep;
}

}  // namespace torus
