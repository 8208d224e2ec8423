#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "torus_stri/quadruple.hpp"
#include "torus_stri/spectrum.hpp"

namespace torus {

// Multiplies every amplitude by e^{-it|xi|^2}.
WeightedSpectrum evolve(const WeightedSpectrum& f, double t);

// Samples of u(x) = sum f(xi) e^{i xi.x} at x = 2 pi (a, b) / n,
// a, b = 0..n-1, stored row-major with a (the x1 index) outermost.
struct PhysicalGrid {
  std::size_t n = 0;
  std::vector<Complex> samples;

  Complex at(std::size_t a, std::size_t b) const { return samples[a * n + b]; }
};

enum class Synthesis { kFft, kDirect };

// n must be odd and at least 2 max|xi_i| + 1 (throws "aliasing").
PhysicalGrid sample_physical(const WeightedSpectrum& f, std::size_t n, Synthesis method = Synthesis::kFft);

// Inverse of sample_physical: all modes of the grid, dropping those with
// |amplitude| <= drop_below.
WeightedSpectrum analyze(const PhysicalGrid& grid, double drop_below = 0.0);

// Smallest FFT-friendly odd n with n >= 4 max|xi_i| + 1, on which the
// grid mean of |u|^4 equals the spatial average exactly.
std::size_t quartic_grid_size(const WeightedSpectrum& f);

// int_{T^2} |u|^q dx = (2 pi)^2 * grid mean of |u|^q.
double spatial_integral_abs_pow(const PhysicalGrid& grid, int q);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t points);

inline constexpr std::size_t kGaussPointsPerPanel = 8;
inline constexpr double kNodesPerPeriod = 12.0;

struct QuadratureOptions {
  std::size_t panels = 0;  // 0: at least kNodesPerPeriod nodes per period of the largest |sigma|
  std::size_t grid = 0;    // 0: quartic_grid_size
  bool error_estimate = true;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |Q(panels) - Q(panels / 2)|
  std::size_t panels = 0;
  std::size_t grid = 0;
};

// Panels needed on [t0, t1] for the node density rule.
std::size_t default_panel_count(const WeightedSpectrum& f, double t0, double t1);

// int_{t0}^{t1} int_{T^2} |e^{it Laplacian} F^{-1} f|^4 dx dt by composite
// Gauss-Legendre in time and an exact grid rule in space.
QuadratureResult l4_quadrature(const WeightedSpectrum& f, double t0, double t1,
                               const QuadratureOptions& options = {});
QuadratureResult l4_quadrature(const WeightedSpectrum& f, double horizon, const QuadratureOptions& options = {});

enum class StrichartzMethod { kAuto, kExact, kQuadrature };

std::string to_string(StrichartzMethod m);
StrichartzMethod parse_strichartz_method(const std::string& name);

struct StrichartzReport {
  std::string set;      // descriptor, e.g. "grid:8"
  std::size_t support = 0;
  double horizon = 0.0;
  double l4 = 0.0;      // ||e^{it Laplacian} phi||_{L^4([0,T] x T^2)}
  double l2 = 0.0;      // ||phi||_{L^2(T^2)}
  double ratio = 0.0;   // l4 / l2
  std::string method;   // "exact-generic", "exact-grid-fast" or "quadrature"
  double error_estimate = 0.0;
};

// 1 / log #S with log x = max{1, ln x}.
double local_horizon(std::size_t support_size);

inline constexpr std::size_t kAutoGenericLimit = 512;

// Exact methods: grid-fast when f is c * chi_box with side <= 257, generic
// otherwise (subject to the generic cap). kAuto falls back to quadrature
// when neither exact path applies cheaply.
StrichartzReport strichartz_ratio(const WeightedSpectrum& f, double horizon,
                                  StrichartzMethod method = StrichartzMethod::kAuto,
                                  const std::string& descriptor = "");
// phi-hat = chi_S and T = 1 / log #S.
StrichartzReport strichartz_ratio(std::span<const FreqPoint> points);

struct ScanRow {
  std::int64_t n = 0;
  double horizon = 0.0;
  double l4 = 0.0;
  double l2 = 0.0;
  double ratio = 0.0;
  double ratio4_over_log_n = 0.0;
  std::string method;
  double seconds = 0.0;  // wall time, only filled when timing is requested
};

// phi-hat = chi_{[-N, N]^2} at T = 2 pi, where only sigma = 0 quadruples
// contribute: R^4 = E_0 / (2 pi (2N+1)^4) with E_0 the rectangle count.
std::vector<ScanRow> extremizer_scan(std::span<const std::int64_t> n_list, bool timing = false);

// Same table for T = 1 / log #S on [-N, N]^2 with the chosen method.
std::vector<ScanRow> local_scan(std::span<const std::int64_t> n_list, StrichartzMethod method,
                                bool timing = false);

// CSV: "N,T,l4,l2,ratio,ratio4_over_logN,method,seconds".
void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows);

// Piecewise-free function u(t) = sum_j 1_{[t_{j-1}, t_j)} e^{it Laplacian} phi_j.
struct PiecewiseFree {
  std::vector<WeightedSpectrum> pieces;  // phi-hat_j, j = 1..J
  std::vector<double> breakpoints;       // t_0 < t_1 < ... < t_J
};

struct CubeLocalReport {
  double l4 = 0.0;           // ||P_C u||_{L^4(I x T^2)}
  double denominator = 0.0;  // (sum_j ||phi_j||_{L^2}^4)^{1/4}
  double ratio = 0.0;
};

// Cube-localized L^4 norm of a piecewise-free function over
// I = [t_0, t_J]; requires |I| <= 1 / log N for the cube size N.
CubeLocalReport cube_local_check(const PiecewiseFree& u, const Cube& cube);

}  // namespace torus
