#include "torus_stri/point_index.hpp"

#include <algorithm>

#include "torus_stri/errors.hpp"

namespace torus {

PointIndex::PointIndex(std::span<const FreqPoint> points) {
  if (points.size() > static_cast<std::size_t>(INT32_MAX)) {
    throw CapExceeded("point_index_cap", "point set too large to index");
  }
  if (points.empty()) return;
  x_lo_ = x_hi_ = points.front().x();
  y_lo_ = y_hi_ = points.front().y();
  for (const auto& p : points) {
    x_lo_ = std::min(x_lo_, p.x());
    x_hi_ = std::max(x_hi_, p.x());
    y_lo_ = std::min(y_lo_, p.y());
    y_hi_ = std::max(y_hi_, p.y());
  }
  height_ = y_hi_ - y_lo_ + 1;
  const std::int64_t width = x_hi_ - x_lo_ + 1;
  dense_ = width <= kDenseLimit && height_ <= kDenseLimit && width * height_ <= kDenseLimit;
  if (dense_) {
    table_.assign(static_cast<std::size_t>(width * height_), -1);
    for (std::size_t i = 0; i < points.size(); ++i) {
      table_[static_cast<std::size_t>((points[i].x() - x_lo_) * height_ + (points[i].y() - y_lo_))] =
          static_cast<std::int32_t>(i);
    }
  } else {
    map_.reserve(points.size() * 2);
    for (std::size_t i = 0; i < points.size(); ++i) {
      map_.emplace(points[i], static_cast<std::int32_t>(i));
    }
  }
}

}  // namespace torus
