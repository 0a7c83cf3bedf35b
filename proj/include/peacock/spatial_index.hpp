#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "peacock/model.hpp"

namespace peacock {

/// Identifies one control point of one edge.
struct ControlRef {
  std::uint32_t edge = 0;
  std::uint32_t control = 0;

  friend auto operator<=>(const ControlRef&, const ControlRef&) = default;
};

/// Uniform grid over the layout extent with cell side `radius`, bucketing
/// every control point. The side grows past `radius` only when the grid
/// would otherwise hold far more cells than points. Queries return exactly
/// the control points within Euclidean distance <= radius of the query point.
class SpatialIndex {
 public:
  SpatialIndex(const GraphLayout& layout, double radius);

  double radius() const { return radius_; }
  double cell_size() const { return cell_; }
  std::size_t columns() const { return cols_; }
  std::size_t rows() const { return rows_; }

  /// Control points within `radius` of p, ordered by (edge, control).
  std::vector<ControlRef> query(const Point2& p) const;

  /// Calls fn(ref) for every control point within `radius` of p, in
  /// unspecified order. Avoids allocating in hot loops.
  template <typename Fn>
  void for_each_near(const Point2& p, Fn&& fn) const;

 private:
  std::size_t cell_of(double value, double origin, std::size_t count) const;

  const GraphLayout* layout_;
  double radius_;
  double cell_;
  double origin_x_;
  double origin_y_;
  std::size_t cols_;
  std::size_t rows_;
  // CSR layout: cell c holds entries_[offsets_[c] .. offsets_[c + 1]).
  std::vector<std::size_t> offsets_;
  std::vector<ControlRef> entries_;
};

template <typename Fn>
void SpatialIndex::for_each_near(const Point2& p, Fn&& fn) const {
  // The scanned range covers the whole box [p - r, p + r]: the 3x3
  // neighbourhood of p's cell when the cell side equals r.
  const double reach = radius_ * (1.0 + 1e-9);
  const std::size_t cx0 = cell_of(p.x - reach, origin_x_, cols_);
  const std::size_t cx1 = cell_of(p.x + reach, origin_x_, cols_);
  const std::size_t cy0 = cell_of(p.y - reach, origin_y_, rows_);
  const std::size_t cy1 = cell_of(p.y + reach, origin_y_, rows_);
  for (std::size_t cy = cy0; cy <= cy1; ++cy) {
    for (std::size_t cx = cx0; cx <= cx1; ++cx) {
      const std::size_t cell = cy * cols_ + cx;
      for (std::size_t k = offsets_[cell]; k < offsets_[cell + 1]; ++k) {
        const ControlRef ref = entries_[k];
        if (distance(p, layout_->edge(ref.edge).controls[ref.control]) <= radius_) fn(ref);
      }
    }
  }
}

}  // namespace peacock
