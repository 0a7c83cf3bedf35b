#include "peacock/spatial_index.hpp"

#include <algorithm>
#include <cmath>

#include "peacock/error.hpp"

namespace peacock {
namespace {

constexpr double kMaxCellsPerPoint = 4.0;
constexpr double kMinCellBudget = 1024.0;

}  // namespace

SpatialIndex::SpatialIndex(const GraphLayout& layout, double radius)
    : layout_(&layout), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ParameterError("spatial index radius must be positive and finite");
  }
  const Extent& box = layout.extent();
  origin_x_ = box.min_x;
  origin_y_ = box.min_y;

  std::size_t points = 0;
  for (const EdgeCurve& e : layout.edges()) points += e.controls.size();

  const double budget = std::max(kMinCellBudget, kMaxCellsPerPoint * static_cast<double>(points));
  cell_ = radius;
  auto cells_along = [this](double span) { return std::floor(span / cell_) + 1.0; };
  if (cells_along(box.width()) * cells_along(box.height()) > budget) {
    cell_ = std::max(radius, std::sqrt(box.width() * box.height() / budget));
    while (cells_along(box.width()) * cells_along(box.height()) > budget) cell_ *= 1.5;
  }
  cols_ = static_cast<std::size_t>(cells_along(box.width()));
  rows_ = static_cast<std::size_t>(cells_along(box.height()));

  // Counting sort of control points into cells.
  std::vector<std::size_t> cell_ids;
  cell_ids.reserve(points);
  offsets_.assign(cols_ * rows_ + 1, 0);
  for (const EdgeCurve& e : layout.edges()) {
    for (const Point2& c : e.controls) {
      const std::size_t cell = cell_of(c.y, origin_y_, rows_) * cols_ + cell_of(c.x, origin_x_, cols_);
      cell_ids.push_back(cell);
      ++offsets_[cell + 1];
    }
  }
  for (std::size_t c = 0; c + 1 < offsets_.size(); ++c) offsets_[c + 1] += offsets_[c];
  entries_.resize(points);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  std::size_t k = 0;
  for (const EdgeCurve& e : layout.edges()) {
    for (std::size_t r = 0; r < e.controls.size(); ++r) {
      entries_[cursor[cell_ids[k++]]++] = {static_cast<std::uint32_t>(e.id),
                                           static_cast<std::uint32_t>(r)};
    }
  }
}

std::size_t SpatialIndex::cell_of(double value, double origin, std::size_t count) const {
  const double cell = std::floor((value - origin) / cell_);
  if (!(cell > 0.0)) return 0;
  return std::min(count - 1, static_cast<std::size_t>(cell));
}

std::vector<ControlRef> SpatialIndex::query(const Point2& p) const {
  std::vector<ControlRef> out;
  for_each_near(p, [&out](ControlRef ref) { out.push_back(ref); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace peacock
