#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "torus_stri/lattice.hpp"

namespace torus {

// Constant-time membership and position lookup for a finite point set.
// Uses a dense table over the bounding box when it is small enough, and a
// hash map otherwise.
class PointIndex {
 public:
  static constexpr std::int64_t kDenseLimit = std::int64_t{1} << 22;

  explicit PointIndex(std::span<const FreqPoint> points);

  // Position of (x, y) in the original span, or -1.
  std::int32_t find(std::int64_t x, std::int64_t y) const {
    if (x < x_lo_ || x > x_hi_ || y < y_lo_ || y > y_hi_) return -1;
    if (dense_) {
      return table_[static_cast<std::size_t>((x - x_lo_) * height_ + (y - y_lo_))];
    }
    auto it = map_.find(FreqPoint{x, y});
    return it == map_.end() ? -1 : it->second;
  }
  std::int32_t find(FreqPoint p) const { return find(p.x(), p.y()); }
  bool contains(FreqPoint p) const { return find(p) >= 0; }

  std::int64_t x_lo() const { return x_lo_; }
  std::int64_t x_hi() const { return x_hi_; }
  std::int64_t y_lo() const { return y_lo_; }
  std::int64_t y_hi() const { return y_hi_; }

 private:
  std::int64_t x_lo_ = 0, x_hi_ = -1, y_lo_ = 0, y_hi_ = -1;
  std::int64_t height_ = 0;
  bool dense_ = false;
  std::vector<std::int32_t> table_;
  std::unordered_map<FreqPoint, std::int32_t, FreqPointHash> map_;
};

}  // namespace torus
