#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

namespace torus::testing {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::int64_t sigma_of(FreqPoint a, FreqPoint b, FreqPoint c, FreqPoint d) {
  return a.norm2() - b.norm2() + c.norm2() - d.norm2();
}

}  // namespace

std::map<std::int64_t, BruteBin> brute_sigma_histogram(const WeightedSpectrum& f) {
  std::map<FreqPoint, Complex> amp;
  for (const auto& e : f.entries()) amp[e.point] = e.amplitude;
  std::map<std::int64_t, BruteBin> out;
  for (const auto& [a, fa] : amp) {
    for (const auto& [b, fb] : amp) {
      for (const auto& [d, fd] : amp) {
        const FreqPoint c{b.x() + d.x() - a.x(), b.y() + d.y() - a.y()};
        auto it = amp.find(c);
        if (it == amp.end()) continue;
        auto& bin = out[sigma_of(a, b, c, d)];
        bin.count += 1;
        bin.weight += fa * std::conj(fb) * it->second * std::conj(fd);
      }
    }
  }
  return out;
}

Int128 brute_quadruple_count(std::span<const FreqPoint> s) {
  Int128 n = 0;
  for (FreqPoint a : s)
    for (FreqPoint b : s)
      for (FreqPoint c : s)
        for (FreqPoint d : s)
          if (a.x() + c.x() == b.x() + d.x() && a.y() + c.y() == b.y() + d.y()) ++n;
  return n;
}

Int128 convolution_energy(std::span<const FreqPoint> s) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> r;
  for (FreqPoint a : s)
    for (FreqPoint b : s) ++r[{a.x() + b.x(), a.y() + b.y()}];
  Int128 e = 0;
  for (const auto& [k, v] : r) e += static_cast<Int128>(v) * v;
  return e;
}

double brute_weighted_tau_range(const WeightedSpectrum& f, std::int64_t lo, std::int64_t hi) {
  double total = 0.0;
  for (const auto& [sigma, bin] : brute_sigma_histogram(f)) {
    const std::int64_t tau = sigma < 0 ? -sigma : sigma;
    if (tau >= lo && tau < hi) total += bin.weight.real();
  }
  return total;
}

std::vector<std::vector<FreqPoint>> pair_grouping_lines(std::span<const FreqPoint> s) {
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::set<FreqPoint>> groups;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t k = i + 1; k < s.size(); ++k) {
      // Normal vector (a, b) of the line through s[i], s[k].
      std::int64_t a = s[k].y() - s[i].y();
      std::int64_t b = s[i].x() - s[k].x();
      const std::int64_t g = std::gcd(a, b);
      a /= g;
      b /= g;
      if (a < 0 || (a == 0 && b < 0)) {
        a = -a;
        b = -b;
      }
      const std::int64_t c = a * s[i].x() + b * s[i].y();
      auto& pts = groups[{a, b, c}];
      pts.insert(s[i]);
      pts.insert(s[k]);
    }
  }
  std::vector<std::vector<FreqPoint>> lines;
  for (const auto& [key, pts] : groups) lines.emplace_back(pts.begin(), pts.end());
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::size_t brute_rich_count(std::span<const FreqPoint> s, std::size_t k) {
  std::size_t m = 0;
  for (const auto& l : pair_grouping_lines(s)) m += l.size() >= k ? 1 : 0;
  return m;
}

Complex direct_synthesis(const WeightedSpectrum& f, double x1, double x2, double t) {
  Complex u;
  for (const auto& e : f.entries()) {
    const double phase = static_cast<double>(e.point.x()) * x1 + static_cast<double>(e.point.y()) * x2 -
                         static_cast<double>(e.point.norm2()) * t;
    u += e.amplitude * Complex(std::cos(phase), std::sin(phase));
  }
  return u;
}

double direct_l4_full_period(const WeightedSpectrum& f, std::size_t nt, std::size_t nx) {
  long double total = 0.0L;
  for (std::size_t it = 0; it < nt; ++it) {
    const double t = 2.0 * kPi * static_cast<double>(it) / static_cast<double>(nt);
    for (std::size_t a = 0; a < nx; ++a) {
      for (std::size_t b = 0; b < nx; ++b) {
        const double x1 = 2.0 * kPi * static_cast<double>(a) / static_cast<double>(nx);
        const double x2 = 2.0 * kPi * static_cast<double>(b) / static_cast<double>(nx);
        const double m = std::norm(direct_synthesis(f, x1, x2, t));
        total += static_cast<long double>(m * m);
      }
    }
  }
  const double cell = (2.0 * kPi / static_cast<double>(nt)) * (2.0 * kPi) * (2.0 * kPi) /
                      static_cast<double>(nx * nx);
  return static_cast<double>(total) * cell;
}

double brute_l4_integral(const WeightedSpectrum& f, double t0, double t1) {
  long double total = 0.0L;
  for (const auto& [sigma, bin] : brute_sigma_histogram(f)) {
    Complex k;
    if (sigma == 0) {
      k = Complex(t1 - t0, 0.0);
    } else {
      const double s = static_cast<double>(sigma);
      // (e^{-i s t1} - e^{-i s t0}) / (-i s)
      const Complex num = std::polar(1.0, -s * t1) - std::polar(1.0, -s * t0);
      k = num / Complex(0.0, -s);
    }
    total += static_cast<long double>((bin.weight * k).real());
  }
  return static_cast<double>(total) * 4.0 * kPi * kPi;
}

double direct_sobolev(const WeightedSpectrum& f, double s) {
  double sum = 0.0;
  for (const auto& e : f.entries()) {
    sum += std::pow(1.0 + static_cast<double>(e.point.norm2()), s) * std::norm(e.amplitude);
  }
  return 2.0 * kPi * std::sqrt(sum);
}

Int128 brute_rectangle_count(std::span<const FreqPoint> s) {
  const std::set<FreqPoint> set(s.begin(), s.end());
  Int128 n = 0;
  for (FreqPoint a : s)
    for (FreqPoint b : s)
      for (FreqPoint d : s) {
        const FreqPoint c{b.x() + d.x() - a.x(), b.y() + d.y() - a.y()};
        if (set.count(c) && sigma_of(a, b, c, d) == 0) ++n;
      }
  return n;
}

std::vector<std::array<FreqPoint, 4>> brute_rectangles(std::span<const FreqPoint> s) {
  const std::set<FreqPoint> set(s.begin(), s.end());
  std::vector<std::array<FreqPoint, 4>> out;
  for (FreqPoint a : s)
    for (FreqPoint b : s)
      for (FreqPoint d : s) {
        const FreqPoint c{b.x() + d.x() - a.x(), b.y() + d.y() - a.y()};
        if (!set.count(c) || sigma_of(a, b, c, d) != 0) continue;
        const std::set<FreqPoint> distinct{a, b, c, d};
        if (distinct.size() == 4) out.push_back({a, b, c, d});
      }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace torus::testing
