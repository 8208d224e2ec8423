#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "torus_stri/lattice.hpp"

namespace torus {

using Complex = std::complex<double>;

struct SpectrumEntry {
  FreqPoint point;
  Complex amplitude;
};

// Finitely supported function Z^2 -> C, stored in lexicographic order of
// frequency. Zero amplitudes are never stored.
class WeightedSpectrum {
 public:
  WeightedSpectrum() = default;
  // Throws ValidationError on duplicate frequencies.
  explicit WeightedSpectrum(std::vector<SpectrumEntry> entries);

  static WeightedSpectrum indicator(std::span<const FreqPoint> points, double value = 1.0);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::span<const SpectrumEntry> entries() const noexcept { return entries_; }
  std::vector<FreqPoint> support() const;

  // Amplitude at p, zero when p is outside the support.
  Complex at(FreqPoint p) const;
  bool contains(FreqPoint p) const;

  double l2_norm_squared() const;
  double l2_norm() const;
  bool is_nonnegative() const;
  std::int64_t max_abs_component() const;
  std::int64_t max_norm2() const;

  // Amplitudes multiplied pointwise; the support is preserved.
  WeightedSpectrum scaled(Complex factor) const;
  WeightedSpectrum translated(FreqPoint shift) const;

  friend bool operator==(const WeightedSpectrum& a, const WeightedSpectrum& b);

 private:
  std::vector<SpectrumEntry> entries_;
};

// Closed axis-aligned box [x_lo, x_hi] x [y_lo, y_hi].
struct Box {
  std::int64_t x_lo = 0;
  std::int64_t x_hi = 0;
  std::int64_t y_lo = 0;
  std::int64_t y_hi = 0;

  static Box centered(std::int64_t n) { return {-n, n, -n, n}; }
  bool contains(FreqPoint p) const {
    return p.x() >= x_lo && p.x() <= x_hi && p.y() >= y_lo && p.y() <= y_hi;
  }
  std::int64_t width() const { return x_hi - x_lo + 1; }
  std::int64_t height() const { return y_hi - y_lo + 1; }
  std::vector<FreqPoint> points() const;
  friend bool operator==(const Box&, const Box&) = default;
};

// The cube (0, N]^2 + N * anchor. Cubes of a fixed N tile Z^2.
struct Cube {
  std::int64_t size = 1;
  FreqPoint anchor;

  Cube(std::int64_t n, FreqPoint a);
  static Cube containing(FreqPoint p, std::int64_t n);
  bool contains(FreqPoint p) const;
  Box as_box() const;
};

// Sorted set of points.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<FreqPoint> points);
  bool contains(FreqPoint p) const;
  std::span<const FreqPoint> points() const noexcept { return points_; }

 private:
  std::vector<FreqPoint> points_;
};

using Region = std::variant<PointSet, Cube, Box>;

bool region_contains(const Region& region, FreqPoint p);

// Fourier multiplier by the indicator of `region`.
WeightedSpectrum project(const WeightedSpectrum& f, const Region& region);
// Fourier multiplier by the indicator of the complement of `region`.
WeightedSpectrum project_complement(const WeightedSpectrum& f, const Region& region);

bool is_dyadic(std::int64_t n);

// Text format: one "x y re [im]" entry per line, '#' starts a comment.
// Errors carry the offending line number.
WeightedSpectrum parse_spectrum(std::istream& in, const std::string& source = "<input>");
WeightedSpectrum load_spectrum(const std::string& path);
void write_spectrum(std::ostream& out, const WeightedSpectrum& f);

// Canonical JSON: array of {x, y, re, im} in lexicographic order.
std::string spectrum_to_json(const WeightedSpectrum& f);
WeightedSpectrum spectrum_from_json(const std::string& text);

}  // namespace torus
