#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include "torus_stri/errors.hpp"

namespace torus {

// Largest admissible |component|. Keeps |xi|^2, dot products and the
// resonance phase of any parallelogram inside int64.
inline constexpr std::int64_t kMaxComponent = std::int64_t{1} << 30;

// A frequency in Z^2.
class FreqPoint {
 public:
  constexpr FreqPoint() = default;
  constexpr FreqPoint(std::int64_t x, std::int64_t y) : x_(x), y_(y) {
    if (x < -kMaxComponent || x > kMaxComponent || y < -kMaxComponent ||
        y > kMaxComponent) {
      throw ValidationError("component_out_of_range",
                            "frequency component exceeds 2^30 in magnitude");
    }
  }

  constexpr std::int64_t x() const noexcept { return x_; }
  constexpr std::int64_t y() const noexcept { return y_; }

  constexpr std::int64_t norm2() const noexcept { return x_ * x_ + y_ * y_; }
  constexpr std::int64_t max_abs() const noexcept {
    const std::int64_t ax = x_ < 0 ? -x_ : x_;
    const std::int64_t ay = y_ < 0 ? -y_ : y_;
    return ax > ay ? ax : ay;
  }
  constexpr bool is_zero() const noexcept { return x_ == 0 && y_ == 0; }

  friend constexpr auto operator<=>(const FreqPoint&, const FreqPoint&) = default;

  friend constexpr FreqPoint operator+(FreqPoint a, FreqPoint b) {
    return {a.x_ + b.x_, a.y_ + b.y_};
  }
  friend constexpr FreqPoint operator-(FreqPoint a, FreqPoint b) {
    return {a.x_ - b.x_, a.y_ - b.y_};
  }
  friend constexpr FreqPoint operator-(FreqPoint a) { return {-a.x_, -a.y_}; }
  friend constexpr FreqPoint operator*(std::int64_t k, FreqPoint a) {
    return {k * a.x_, k * a.y_};
  }

 private:
  std::int64_t x_ = 0;
  std::int64_t y_ = 0;
};

constexpr std::int64_t dot(FreqPoint a, FreqPoint b) noexcept {
  return a.x() * b.x() + a.y() * b.y();
}

// (a,b) -> (-b,a): rotation by a quarter turn.
constexpr FreqPoint perp(FreqPoint p) { return {-p.y(), p.x()}; }

constexpr std::int64_t gcd_int(std::int64_t a, std::int64_t b) noexcept {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// gcd(|x|, |y|); undefined for the origin.
inline std::int64_t gcd_point(FreqPoint p) {
  if (p.is_zero()) {
    throw ValidationError("gcd_of_zero", "gcd of the zero vector is undefined");
  }
  return gcd_int(p.x(), p.y());
}

// Primitive direction of a nonzero vector, signed so that x > 0, or x == 0
// and y > 0.
inline FreqPoint primitive_direction(FreqPoint v) {
  const std::int64_t g = gcd_point(v);
  std::int64_t dx = v.x() / g;
  std::int64_t dy = v.y() / g;
  if (dx < 0 || (dx == 0 && dy < 0)) {
    dx = -dx;
    dy = -dy;
  }
  return {dx, dy};
}

// log x := max{1, ln x}.
inline double log_floor1(double x) {
  const double l = std::log(x);
  return l > 1.0 ? l : 1.0;
}

std::string to_string(FreqPoint p);

struct FreqPointHash {
  std::size_t operator()(FreqPoint p) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(p.x()) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(p.y()) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace torus
