#include "peacock/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "json.hpp"
#include "peacock/error.hpp"

namespace peacock {
namespace {

constexpr double kRadius = 100.0;
constexpr std::size_t kWaypoints = 10;
constexpr double kThresholdFraction = 0.03;
// Per-coordinate jitter bound. The layout's larger side is at least kRadius,
// so T >= 0.03 * kRadius and the jitter vector stays below T / 4.
constexpr double kJitter = 0.1 * kThresholdFraction * kRadius;

Point2 on_circle(double angle) { return {kRadius * std::cos(angle), kRadius * std::sin(angle)}; }

Point2 lerp(const Point2& a, const Point2& b, double t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

std::string group_label(std::size_t g, std::size_t groups) {
  if (groups <= 26) return std::string(1, static_cast<char>('A' + g));
  return "G" + std::to_string(g) + "_";
}

class Jitter {
 public:
  explicit Jitter(std::uint64_t seed) : rng_(seed), dist_(-kJitter, kJitter) {}
  Point2 operator()(const Point2& p) { return {p.x + dist_(rng_), p.y + dist_(rng_)}; }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> dist_;
};

// Positions of `count` nodes centred on `angle`, spaced `step` radians apart.
std::vector<double> spread(double angle, double step, std::size_t count) {
  std::vector<double> out(count);
  const double mid = 0.5 * static_cast<double>(count - 1);
  for (std::size_t n = 0; n < count; ++n) out[n] = angle + (static_cast<double>(n) - mid) * step;
  return out;
}

Fixture finish(std::vector<EdgeCurve> edges, std::vector<Node> nodes, GroundTruth truth) {
  GraphLayout layout(std::move(edges), std::move(nodes));
  const double threshold = kThresholdFraction * layout.extent().max_side();
  return {std::move(layout), std::move(truth), threshold, 0.4};
}

}  // namespace

FlagMatrix ground_truth_flags(const GroundTruth& truth, std::size_t edge_count) {
  FlagMatrix flags = FlagMatrix::Constant(edge_count, edge_count, false);
  for (const auto& bundle : truth.bundles) {
    for (std::size_t a : bundle) {
      for (std::size_t b : bundle) {
        if (a != b) flags(a, b) = true;
      }
    }
  }
  return flags;
}

Fixture make_ordered_bundles(std::size_t groups, std::size_t edges_per_bundle, bool reverse_last,
                             std::uint64_t seed) {
  if (groups < 2 || groups % 2 != 0) throw ParameterError("groups must be even and at least 2");
  if (edges_per_bundle < 2) throw ParameterError("edges_per_bundle must be at least 2");
  const std::size_t bundle_count = groups / 2;

  // Bundle k runs vertically at x_k from the upper half of the circle to its
  // mirror image. Neighbouring corridors are 1.8 R / bundle_count apart.
  std::vector<double> alphas(bundle_count);
  for (std::size_t k = 0; k < bundle_count; ++k) {
    const double x = 0.9 * (-1.0 + (2.0 * k + 1.0) / static_cast<double>(bundle_count));
    alphas[k] = std::acos(x);
  }
  // Smallest angular distance between neighbouring groups, including a group
  // and its mirror image across the x axis.
  double min_gap = std::min(2.0 * (std::numbers::pi - alphas.front()), 2.0 * alphas.back());
  for (std::size_t k = 0; k + 1 < bundle_count; ++k) {
    min_gap = std::min(min_gap, alphas[k] - alphas[k + 1]);
  }
  const double step = std::min(4.0 * std::numbers::pi / 180.0,
                               0.5 * min_gap / static_cast<double>(edges_per_bundle));

  Jitter jitter(seed);
  std::vector<EdgeCurve> edges;
  std::vector<Node> nodes;
  GroundTruth truth;
  for (std::size_t k = 0; k < bundle_count; ++k) {
    const double alpha = alphas[k];
    const std::vector<double> src = spread(alpha, step, edges_per_bundle);
    const std::vector<double> dst_nodes = spread(-alpha, -step, edges_per_bundle);
    std::vector<double> dst = dst_nodes;
    const bool reversed = reverse_last && k + 1 == bundle_count;
    if (reversed) std::reverse(dst.begin(), dst.end());

    const std::string src_label = group_label(k, groups);
    const std::string dst_label = group_label(bundle_count + k, groups);
    for (std::size_t n = 0; n < edges_per_bundle; ++n) {
      nodes.push_back({src_label + std::to_string(n), on_circle(src[n])});
    }
    for (std::size_t n = 0; n < edges_per_bundle; ++n) {
      nodes.push_back({dst_label + std::to_string(n), on_circle(dst_nodes[n])});
    }

    const Point2 corridor_start = on_circle(alpha);
    const Point2 corridor_end = on_circle(-alpha);
    std::vector<std::size_t> members;
    std::vector<std::size_t> ranks;
    for (std::size_t n = 0; n < edges_per_bundle; ++n) {
      EdgeCurve e;
      e.id = edges.size();
      e.v1 = on_circle(src[n]);
      e.v2 = on_circle(dst[n]);
      e.controls.push_back(e.v1);
      for (std::size_t w = 0; w < kWaypoints; ++w) {
        const double t = static_cast<double>(w + 1) / static_cast<double>(kWaypoints + 1);
        e.controls.push_back(jitter(lerp(corridor_start, corridor_end, t)));
      }
      e.controls.push_back(e.v2);
      members.push_back(e.id);
      ranks.push_back(n);
      edges.push_back(std::move(e));
    }
    truth.bundles.push_back(std::move(members));
    truth.order.push_back(std::move(ranks));
  }
  return finish(std::move(edges), std::move(nodes), std::move(truth));
}

Fixture make_crossing_bundles(std::size_t bundles, std::size_t edges_per_bundle,
                              std::uint64_t seed) {
  if (bundles < 2) throw ParameterError("bundles must be at least 2");
  if (edges_per_bundle < 1) throw ParameterError("edges_per_bundle must be at least 1");

  const double sector = std::numbers::pi / static_cast<double>(bundles);
  const double step = std::min(4.0 * std::numbers::pi / 180.0,
                               0.5 * sector / static_cast<double>(edges_per_bundle));
  const double spacing = kRadius / 6.0;

  Jitter jitter(seed);
  std::vector<EdgeCurve> edges;
  std::vector<Node> nodes;
  GroundTruth truth;
  for (std::size_t b = 0; b < bundles; ++b) {
    const double theta = (static_cast<double>(b) + 0.5) * sector;
    const Point2 dir{std::cos(theta), std::sin(theta)};
    const std::vector<double> src = spread(theta, step, edges_per_bundle);
    const std::vector<double> dst = spread(theta + std::numbers::pi, -step, edges_per_bundle);

    const std::string src_label = group_label(b, 2 * bundles);
    const std::string dst_label = group_label(bundles + b, 2 * bundles);
    for (std::size_t n = 0; n < edges_per_bundle; ++n) {
      nodes.push_back({src_label + std::to_string(n), on_circle(src[n])});
    }
    for (std::size_t n = 0; n < edges_per_bundle; ++n) {
      nodes.push_back({dst_label + std::to_string(n), on_circle(dst[n])});
    }

    std::vector<std::size_t> members;
    std::vector<std::size_t> ranks;
    for (std::size_t n = 0; n < edges_per_bundle; ++n) {
      EdgeCurve e;
      e.id = edges.size();
      e.v1 = on_circle(src[n]);
      e.v2 = on_circle(dst[n]);
      e.controls.push_back(e.v1);
      // Waypoint index 5 sits on the centre, where all corridors cross.
      for (std::size_t w = 0; w < kWaypoints; ++w) {
        const double offset = (5.0 - static_cast<double>(w)) * spacing;
        e.controls.push_back(jitter({offset * dir.x, offset * dir.y}));
      }
      e.controls.push_back(e.v2);
      members.push_back(e.id);
      ranks.push_back(n);
      edges.push_back(std::move(e));
    }
    truth.bundles.push_back(std::move(members));
    truth.order.push_back(std::move(ranks));
  }
  return finish(std::move(edges), std::move(nodes), std::move(truth));
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  nlohmann::ordered_json doc;
  doc["bundles"] = truth.bundles;
  doc["order"] = truth.order;
  return doc.dump(2) + "\n";
}

GroundTruth parse_ground_truth(const std::string& json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    GroundTruth truth;
    doc.at("bundles").get_to(truth.bundles);
    doc.at("order").get_to(truth.order);
    if (truth.bundles.size() != truth.order.size()) {
      throw ParseError("ground truth: 'bundles' and 'order' differ in length");
    }
    return truth;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ground truth JSON: ") + e.what());
  }
}

}  // namespace peacock
