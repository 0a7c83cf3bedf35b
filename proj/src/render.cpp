#include "peacock/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "peacock/error.hpp"

namespace peacock {
namespace {

constexpr const char* kMutedStroke = "#c0c0c0";
constexpr const char* kNodeFill = "#404040";

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string point_text(const Point2& p) { return fixed3(p.x) + " " + fixed3(p.y); }

std::string polyline_path(const std::vector<Point2>& pts) {
  std::string d = "M " + point_text(pts.front());
  if (pts.size() == 1) {
    d += " L " + point_text(pts.front());
  }
  for (std::size_t k = 1; k < pts.size(); ++k) d += " L " + point_text(pts[k]);
  return d;
}

std::vector<bool> near_flags(const EdgeCurve& edge_i, const EdgeCurve& edge_j, double threshold) {
  std::vector<bool> near(edge_i.controls.size(), false);
  for (std::size_t r = 0; r < near.size(); ++r) {
    for (const Point2& w : edge_j.controls) {
      if (distance(edge_i.controls[r], w) <= threshold) {
        near[r] = true;
        break;
      }
    }
  }
  return near;
}

}  // namespace

FanSegments find_fan_segments(const EdgeCurve& edge_i, const EdgeCurve& edge_j, double threshold,
                              std::size_t run_length) {
  const std::vector<bool> near = near_flags(edge_i, edge_j, threshold);
  const std::size_t c = near.size();
  std::size_t run = 0;
  for (std::size_t r = 0; r < c && run_length > 0; ++r) {
    run = near[r] ? run + 1 : 0;
    if (run == run_length) {
      FanSegments fans;
      fans.run_begin = r + 1 - run_length;
      fans.run_end = r;
      while (fans.run_end + 1 < c && near[fans.run_end + 1]) ++fans.run_end;
      if (fans.run_begin > 0) fans.fan_in = fans.run_begin - 1;
      if (fans.run_end + 1 < c) fans.fan_out = fans.run_end;
      return fans;
    }
  }
  throw ParameterError("edges " + std::to_string(edge_i.id) + " and " + std::to_string(edge_j.id) +
                       " are not bundled");
}

std::vector<std::vector<std::size_t>> collect_fan_segments(const GraphLayout& layout,
                                                           const FlagMatrix& flags,
                                                           double threshold, double k_min) {
  const std::size_t m = layout.size();
  if (static_cast<std::size_t>(flags.rows()) != m || static_cast<std::size_t>(flags.cols()) != m) {
    throw ParameterError("flag matrix does not match the layout");
  }
  std::vector<std::vector<std::size_t>> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const EdgeCurve& ei = layout.edge(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || !flags(i, j)) continue;
      const EdgeCurve& ej = layout.edge(j);
      const FanSegments fans = find_fan_segments(
          ei, ej, threshold, required_run_length(ei.controls.size(), ej.controls.size(), k_min));
      if (fans.fan_in) out[i].push_back(*fans.fan_in);
      if (fans.fan_out) out[i].push_back(*fans.fan_out);
    }
    std::sort(out[i].begin(), out[i].end());
    out[i].erase(std::unique(out[i].begin(), out[i].end()), out[i].end());
  }
  return out;
}

std::string hex_color(const Rgb& rgb) {
  char buf[8];
  auto channel = [](double c) {
    return static_cast<unsigned>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
  };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(rgb[0]), channel(rgb[1]), channel(rgb[2]));
  return buf;
}

std::string render_svg(const GraphLayout& layout, const std::vector<Rgb>& colors,
                       const RenderOptions& options) {
  const std::size_t m = layout.size();
  if (colors.size() != m) {
    throw ParameterError("got " + std::to_string(colors.size()) + " colors for " +
                         std::to_string(m) + " edges");
  }
  if (options.fan_segments && options.fan_segments->size() != m) {
    throw ParameterError("fan segment list does not match the layout");
  }

  const Extent& box = layout.extent();
  const double side = box.max_side() > 0.0 ? box.max_side() : 1.0;
  const double pad_x = 0.05 * (box.width() > 0.0 ? box.width() : side);
  const double pad_y = 0.05 * (box.height() > 0.0 ? box.height() : side);
  const double view_w = box.width() + 2.0 * pad_x;
  const double view_h = box.height() + 2.0 * pad_y;
  const double scale = options.pixel_size / std::max(view_w, view_h);
  const double stroke = options.stroke_width.value_or(side / 300.0);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\""
      << fixed3(box.min_x - pad_x) << " " << fixed3(box.min_y - pad_y) << " " << fixed3(view_w)
      << " " << fixed3(view_h) << "\" width=\"" << fixed3(view_w * scale) << "\" height=\""
      << fixed3(view_h * scale) << "\">\n";
  svg << "<g fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\" stroke-width=\""
      << fixed3(stroke) << "\" stroke-opacity=\"" << fixed3(options.opacity) << "\">\n";

  for (std::size_t i = 0; i < m; ++i) {
    const EdgeCurve& e = layout.edge(i);
    const std::string stroke_color = options.fan_segments ? kMutedStroke : hex_color(colors[i]);
    svg << "<path id=\"e" << i << "\" d=\"" << polyline_path(e.controls) << "\" stroke=\""
        << stroke_color << "\"/>\n";
  }

  if (options.fan_segments) {
    for (std::size_t i = 0; i < m; ++i) {
      const EdgeCurve& e = layout.edge(i);
      const std::string color = hex_color(colors[i]);
      const auto& segments = (*options.fan_segments)[i];
      if (!segments.empty()) {
        std::string d;
        for (std::size_t s : segments) {
          if (s + 1 >= e.controls.size()) {
            throw ParameterError("edge " + std::to_string(i) + ": fan segment out of range");
          }
          if (!d.empty()) d += " ";
          d += "M " + point_text(e.controls[s]) + " L " + point_text(e.controls[s + 1]);
        }
        svg << "<path class=\"fan\" data-edge=\"" << i << "\" d=\"" << d << "\" stroke=\"" << color
            << "\"/>\n";
      }
      for (const Point2& p : {e.v1, e.v2}) {
        svg << "<circle class=\"end\" data-edge=\"" << i << "\" cx=\"" << fixed3(p.x) << "\" cy=\""
            << fixed3(p.y) << "\" r=\"" << fixed3(1.5 * stroke) << "\" fill=\"" << color
            << "\" stroke=\"none\"/>\n";
      }
    }
  }
  svg << "</g>\n";

  if (options.draw_nodes && !layout.nodes().empty()) {
    svg << "<g fill=\"" << kNodeFill << "\" stroke=\"none\">\n";
    for (const Node& n : layout.nodes()) {
      svg << "<circle cx=\"" << fixed3(n.pos.x) << "\" cy=\"" << fixed3(n.pos.y) << "\" r=\""
          << fixed3(2.0 * stroke) << "\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace peacock
