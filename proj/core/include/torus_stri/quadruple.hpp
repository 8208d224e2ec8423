#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "torus_stri/format.hpp"
#include "torus_stri/lattice.hpp"
#include "torus_stri/spectrum.hpp"

namespace torus {

// Ordered quadruple (xi1, xi2, xi3, xi4) with xi1 + xi3 = xi2 + xi4.
class Parallelogram {
 public:
  // Throws ValidationError unless xi1 + xi3 == xi2 + xi4.
  Parallelogram(FreqPoint xi1, FreqPoint xi2, FreqPoint xi3, FreqPoint xi4);
  // Completes the quadruple with xi3 = xi2 + xi4 - xi1.
  static Parallelogram from_corner(FreqPoint xi1, FreqPoint xi2, FreqPoint xi4);

  FreqPoint vertex(int k) const { return v_[static_cast<std::size_t>(k - 1)]; }  // k = 1..4
  const std::array<FreqPoint, 4>& vertices() const { return v_; }

  // |xi1|^2 - |xi2|^2 + |xi3|^2 - |xi4|^2 = 2 (xi1 - xi2).(xi1 - xi4)
  std::int64_t sigma() const { return sigma_; }
  std::int64_t tau() const { return sigma_ < 0 ? -sigma_ : sigma_; }
  bool distinct_vertices() const;

 private:
  std::array<FreqPoint, 4> v_;
  std::int64_t sigma_ = 0;
};

enum class Backend { kGeneric, kGridFast };

inline constexpr std::size_t kDefaultGenericCap = 4096;

// Every ordered parallelogram with vertices in S, each exactly once, in the
// order xi1 (lexicographic) outer, then xi2, then xi4. Sequential.
void enumerate_parallelograms(std::span<const FreqPoint> points,
                              const std::function<void(const Parallelogram&)>& visit,
                              std::size_t cap = kDefaultGenericCap);

// Translation class of parallelograms inside a box: all quadruples with
// edge vectors a = xi1 - xi2, b = xi1 - xi4 and xi1 ranging over the
// `translates` admissible positions.
struct ParallelogramClass {
  FreqPoint edge_a;
  FreqPoint edge_b;
  std::int64_t sigma = 0;
  std::int64_t translates = 0;
};

// Grid-fast enumeration over a box: iterates (a, b) and counts translates
// in closed form as a product of 1-D overlap lengths. Only classes with a
// nonzero translate count are visited.
void enumerate_box_classes(const Box& box, const std::function<void(const ParallelogramClass&)>& visit);

// sum_eta r(eta)^2 with r(eta) = #{(p, q) in S^2 : p + q = eta}.
Int128 additive_energy(std::span<const FreqPoint> points);

// Per signed phase: number of parallelograms and the summed weight
// f(xi1) conj f(xi2) f(xi3) conj f(xi4).
struct SigmaBin {
  std::int64_t sigma = 0;
  Int128 count = 0;
  Complex weight;
};

struct TauBin {
  std::int64_t tau = 0;
  Int128 count = 0;
  double weighted_sum = 0.0;
};

// Dyadic bin tau in [M, 2M); the rectangle bin tau = 0 is reported as M = 0.
struct DyadicBin {
  std::int64_t m = 0;
  Int128 count = 0;
  double weighted_sum = 0.0;
};

class SigmaHistogram {
 public:
  SigmaHistogram() = default;
  explicit SigmaHistogram(std::vector<SigmaBin> bins);

  const std::vector<SigmaBin>& bins() const noexcept { return bins_; }
  Int128 total_count() const;
  std::vector<TauBin> tau_view() const;
  std::vector<DyadicBin> dyadic_view() const;
  // Weighted sum over |sigma| in [lo, hi).
  double weighted_sum_tau_range(std::int64_t lo, std::int64_t hi) const;

  friend bool operator==(const SigmaHistogram& a, const SigmaHistogram& b);

 private:
  std::vector<SigmaBin> bins_;  // ascending sigma, no empty bins
};

struct EnumerationOptions {
  Backend backend = Backend::kGeneric;
  std::size_t cap = kDefaultGenericCap;
};

// Histogram of all parallelograms over supp f. The generic backend is
// parallel over xi1 in fixed-size blocks combined in block order, so the
// result is bit-identical for any thread count. The grid-fast backend
// requires f to be a constant multiple of the indicator of a box.
SigmaHistogram sigma_histogram(const WeightedSpectrum& f, const EnumerationOptions& options = {});
SigmaHistogram sigma_histogram(std::span<const FreqPoint> points, const EnumerationOptions& options = {});

// Histogram of parallelograms inside a box via separable 1-D overlap tables.
SigmaHistogram box_sigma_histogram(const Box& box);

// Number of sigma = 0 quadruples (degenerate ones included) in a box, by
// walking v in [-2N, 2N]^2 and w = k perp(v)/gcd(v).
Int128 box_rectangle_count(const Box& box);

// The box spanned by supp f when f is c * chi_box; nullopt otherwise.
std::optional<Box> as_uniform_box(const WeightedSpectrum& f);

// int_{t0}^{t1} e^{-i sigma t} dt, with the analytic value at sigma = 0.
Complex time_kernel(std::int64_t sigma, double t0, double t1);

// int_{t0}^{t1} int_{T^2} |e^{it Laplacian} F^{-1} f|^4 dx dt from a
// histogram of f: (2 pi)^2 sum_sigma Re(W(sigma) * kernel).
double l4_time_integral(const SigmaHistogram& hist, double t0, double t1);
double l4_time_integral(const SigmaHistogram& hist, double horizon);
double l4_time_integral(const WeightedSpectrum& f, double horizon, const EnumerationOptions& options = {});

// (1 - cos(2 T0 tau)) / (T0 tau^2), with value 2 T0 at tau = 0.
double averaged_kernel(std::int64_t tau, double t0);
double averaged_kernel_sum(const SigmaHistogram& hist, double t0);
double averaged_kernel_sum(const WeightedSpectrum& f, double t0, const EnumerationOptions& options = {});

// (1/M) #{tau in [M, 2M) : g | tau}
double gcd_window_fraction(std::int64_t g, std::int64_t m);

struct GcdFilteredAverage {
  double direct = 0.0;        // from the histogram
  double via_segments = 0.0;  // from segment pairs with a common edge vector
};

// (1/M) sum_{tau in [M, 2M)} sum_{Q in Q^tau} f(Q), computed two ways.
// f must be nonnegative, M a power of two.
GcdFilteredAverage gcd_filtered_average(const WeightedSpectrum& f, std::int64_t m,
                                        std::size_t cap = kDefaultGenericCap);

// Every sigma = 0 quadruple with four distinct vertices in S, found by
// walking the perpendicular line through xi1 for each pair (xi1, xi2).
// Visit order: xi1, then xi2 (lexicographic), then xi4 along the line.
void enumerate_rectangles(std::span<const FreqPoint> points,
                          const std::function<void(const Parallelogram&)>& visit);

// CSV: "tau,count,weighted_sum" and "M,count,weighted_sum".
void write_tau_csv(std::ostream& out, const SigmaHistogram& hist);
void write_dyadic_csv(std::ostream& out, const SigmaHistogram& hist);

}  // namespace torus
