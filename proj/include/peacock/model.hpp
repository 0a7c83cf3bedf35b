#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace peacock {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool is_finite(const Point2& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

/// One bundled edge: its two node positions and the ordered control points
/// of the drawn curve. Curves are treated as polylines through `controls`.
struct EdgeCurve {
  std::size_t id = 0;
  Point2 v1;
  Point2 v2;
  std::vector<Point2> controls;

  friend bool operator==(const EdgeCurve&, const EdgeCurve&) = default;
};

struct Node {
  std::string id;
  Point2 pos;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Axis-aligned bounding box.
struct Extent {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  double max_side() const { return std::max(width(), height()); }

  friend bool operator==(const Extent&, const Extent&) = default;
};

/// Immutable, validated edge layout. Edges are stored in id order, so
/// `edge(i).id == i` always holds.
class GraphLayout {
 public:
  /// Validates and takes ownership. Edges may arrive in any order; ids must
  /// form exactly 0..M-1. Throws ValidationError naming the offending edge.
  explicit GraphLayout(std::vector<EdgeCurve> edges,
                       std::vector<Node> nodes = {});

  std::size_t size() const { return edges_.size(); }
  const EdgeCurve& edge(std::size_t i) const { return edges_[i]; }
  const std::vector<EdgeCurve>& edges() const { return edges_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  /// Bounding box over all endpoints and control points (nodes excluded).
  const Extent& extent() const { return extent_; }

  friend bool operator==(const GraphLayout&, const GraphLayout&) = default;

 private:
  std::vector<EdgeCurve> edges_;
  std::vector<Node> nodes_;
  Extent extent_;
};

struct LayoutSize {
  double width = 0.0;
  double height = 0.0;
};

/// Recomputes the bounding box from scratch.
Extent compute_extent(const std::vector<EdgeCurve>& edges);

LayoutSize layout_extent(const GraphLayout& layout);

GraphLayout parse_layout(std::string_view json_text);
GraphLayout load_layout(const std::filesystem::path& path);

/// Canonical serialization: nodes (if any) then edges in id order, two-space
/// indentation, shortest round-trip decimal doubles.
std::string layout_to_json(const GraphLayout& layout);
void save_layout(const GraphLayout& layout, const std::filesystem::path& path);

}  // namespace peacock
