#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "torus_stri/format.hpp"
#include "torus_stri/lattice.hpp"
#include "torus_stri/spectrum.hpp"

// Slow reference implementations written directly from the definitions.
namespace torus::testing {

struct BruteBin {
  Int128 count = 0;
  Complex weight;
};

// Exhaustive scan over (xi1, xi2, xi4) with xi3 = xi2 + xi4 - xi1.
std::map<std::int64_t, BruteBin> brute_sigma_histogram(const WeightedSpectrum& f);

// Number of 4-tuples (a, b, c, d) in S^4 with a + c = b + d, by scanning S^4.
Int128 brute_quadruple_count(std::span<const FreqPoint> s);

// sum_eta r(eta)^2 with r from an ordered map of pair sums.
Int128 convolution_energy(std::span<const FreqPoint> s);

// sum over quadruples with |sigma| in [lo, hi) of f(Q).
double brute_weighted_tau_range(const WeightedSpectrum& f, std::int64_t lo, std::int64_t hi);

// Lines (as sorted point lists, at least two points) found by grouping all
// pairs under the normal form a x + b y = c with gcd(a, b) = 1, a > 0 or
// a = 0, b > 0.
std::vector<std::vector<FreqPoint>> pair_grouping_lines(std::span<const FreqPoint> s);

// Number of lines with at least k points.
std::size_t brute_rich_count(std::span<const FreqPoint> s, std::size_t k);

// u(x) = sum f(xi) e^{i xi.x} by direct summation.
Complex direct_synthesis(const WeightedSpectrum& f, double x1, double x2, double t = 0.0);

// int_0^{2 pi} int |u|^4 by the trapezoid rule in t with nt nodes and an
// nx-point grid in space; exact when nt > max|sigma| and nx > 4 max|xi|.
double direct_l4_full_period(const WeightedSpectrum& f, std::size_t nt, std::size_t nx);

// (2 pi)^2 sum_Q Re(f(Q) int_{t0}^{t1} e^{-i sigma t} dt) with the integral
// in closed form.
double brute_l4_integral(const WeightedSpectrum& f, double t0, double t1);

// 2 pi (sum (1 + |xi|^2)^s |f|^2)^{1/2}
double direct_sobolev(const WeightedSpectrum& f, double s);

// Number of sigma = 0 quadruples (degenerate included) of a point set.
Int128 brute_rectangle_count(std::span<const FreqPoint> s);

// Distinct-vertex sigma = 0 quadruples as ordered vertex tuples.
std::vector<std::array<FreqPoint, 4>> brute_rectangles(std::span<const FreqPoint> s);

}  // namespace torus::testing
