#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "peacock/bundling.hpp"
#include "peacock/coloring.hpp"
#include "peacock/model.hpp"

namespace peacock {

/// Where edge i enters and leaves the stretch it shares with edge j.
/// Indices are 0-based; segment k joins control points k and k + 1.
struct FanSegments {
  // Inclusive control-point range of the shared run.
  std::size_t run_begin = 0;
  std::size_t run_end = 0;
  // Segment ending at run_begin; absent when the run starts at control 0.
  std::optional<std::size_t> fan_in;
  // Segment starting at run_end; absent when the run reaches the last control.
  std::optional<std::size_t> fan_out;

  friend bool operator==(const FanSegments&, const FanSegments&) = default;
};

/// Uses the earliest run of `run_length` near control points, extended
/// forward while points stay near edge_j. Throws ParameterError if the pair
/// is not bundled.
FanSegments find_fan_segments(const EdgeCurve& edge_i, const EdgeCurve& edge_j, double threshold,
                              std::size_t run_length);

/// For every edge, the sorted fan-in/fan-out segment indices over all of
/// its bundled partners.
std::vector<std::vector<std::size_t>> collect_fan_segments(const GraphLayout& layout,
                                                           const FlagMatrix& flags,
                                                           double threshold, double k_min);

struct RenderOptions {
  // Layout units; unset picks 1/300 of the larger layout side.
  std::optional<double> stroke_width;
  double opacity = 0.85;
  bool draw_nodes = true;
  // Longer side of the output in pixels.
  double pixel_size = 800.0;
  // When set, edges are drawn gray and only these segments (plus endpoint
  // markers) carry the edge color.
  std::optional<std::vector<std::vector<std::size_t>>> fan_segments;
};

/// "#rrggbb", each channel rounded to 8 bits.
std::string hex_color(const Rgb& rgb);

/// Deterministic SVG 1.1 document: one path per edge in id order,
/// coordinates printed with 3 decimals, viewBox = extent padded by 5%.
std::string render_svg(const GraphLayout& layout, const std::vector<Rgb>& colors,
                       const RenderOptions& options = {});

}  // namespace peacock
