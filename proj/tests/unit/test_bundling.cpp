#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "peacock/bundling.hpp"
#include "peacock/error.hpp"
#include "peacock/fixtures.hpp"
#include "peacock/spatial_index.hpp"

using namespace peacock;

namespace {

// Edge 2 runs along the x axis. Edge 1 shares its first stretch, edge 3 its
// last; edges 1 and 3 never come close.
struct ThreeEdges {
  EdgeCurve e1{0, {0, 1}, {5, 7}, {{0, 0.5}, {2, 0.5}, {4, 3}, {5, 6}}};
  EdgeCurve e2{1, {0, 0}, {10, 0}, {{0, 0}, {2, 0}, {4, 0}, {6, 0}, {8, 0}, {10, 0}}};
  EdgeCurve e3{2, {5, -7}, {10, -1}, {{5, -6}, {6, -3}, {8, -0.5}, {10, -0.5}}};
};

GraphLayout transformed(const GraphLayout& g, double angle, Point2 shift) {
  const double c = std::cos(angle), s = std::sin(angle);
  auto f = [&](Point2 p) { return Point2{c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y}; };
  std::vector<EdgeCurve> edges = g.edges();
  for (EdgeCurve& e : edges) {
    e.v1 = f(e.v1);
    e.v2 = f(e.v2);
    for (Point2& p : e.controls) p = f(p);
  }
  return GraphLayout(std::move(edges));
}

bool subset(const FlagMatrix& a, const FlagMatrix& b) {
  return ((a.array() && !b.array())).count() == 0;
}

}  // namespace

TEST_CASE("required run length") {
  CHECK(required_run_length(10, 4, 0.4) == 4);
  CHECK(required_run_length(4, 10, 0.4) == 4);
  CHECK(required_run_length(1, 1, 0.4) == 1);
  CHECK(required_run_length(7, 7, 0.4) == 2);
  CHECK(required_run_length(100, 3, 0.29) == 29);
  for (std::size_t a = 1; a < 40; ++a) {
    for (std::size_t b = 1; b < 40; ++b) {
      for (double k : {0.1, 0.25, 0.4, 0.7, 1.0}) {
        CHECK(required_run_length(a, b, k) == oracle::run_length(a, b, k));
        CHECK(required_run_length(a, b, k) == required_run_length(b, a, k));
      }
    }
  }
}

TEST_CASE("three edges sharing stretches of a middle edge") {
  const ThreeEdges f;
  CHECK(detect_pair(f.e1, f.e2, 1.0, 2));
  CHECK_FALSE(detect_pair(f.e1, f.e3, 1.0, 2));
  CHECK(detect_pair(f.e2, f.e3, 1.0, 2));
  CHECK_FALSE(detect_pair(f.e3, f.e1, 1.0, 2));
  for (const EdgeCurve* a : {&f.e1, &f.e2, &f.e3}) {
    for (const EdgeCurve* b : {&f.e1, &f.e2, &f.e3}) {
      CHECK(detect_pair(*a, *b, 1.0, 2) == oracle::bundled(*a, *b, 1.0, 2));
    }
  }
}

TEST_CASE("detect_pair basics") {
  const EdgeCurve a{0, {0, 0}, {3, 0}, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}};
  EdgeCurve copy = a;
  copy.id = 1;
  for (std::size_t k = 1; k <= 4; ++k) CHECK(detect_pair(a, copy, 0.01, k));
  CHECK_FALSE(detect_pair(a, copy, 0.01, 5));

  const EdgeCurve far{1, {0, 5}, {3, 5}, {{0, 5}, {3, 5}}};
  CHECK_FALSE(detect_pair(a, far, 1.0, 1));

  // Closed threshold.
  const EdgeCurve exact{1, {0, 2}, {0, 2}, {{0, 2}}};
  CHECK(detect_pair(exact, a, 2.0, 1));
  CHECK_FALSE(detect_pair(exact, a, std::nextafter(2.0, 0.0), 1));
}

TEST_CASE("runs must be consecutive") {
  const EdgeCurve j{1, {0, 0}, {10, 0}, {{0, 0}, {10, 0}}};
  // near, far, near: two near points but no run of two.
  const EdgeCurve i{0, {0, 0}, {10, 0}, {{0, 0.1}, {5, 5}, {10, 0.1}}};
  CHECK(detect_pair(i, j, 1.0, 1));
  CHECK_FALSE(detect_pair(i, j, 1.0, 2));
}

TEST_CASE("spatial index queries") {
  const GraphLayout one({EdgeCurve{0, {0, 0}, {1, 1}, {{3, 4}}}});
  const SpatialIndex idx(one, 2.0);
  CHECK(idx.query({3, 4}) == std::vector<ControlRef>{{0, 0}});
  CHECK(idx.query({3 + 2.0 * 1.001, 4}).empty());
  CHECK(idx.query({3 + 2.0, 4}).size() == 1);
  CHECK_THROWS_AS(SpatialIndex(one, 0.0), ParameterError);
}

TEST_CASE("spatial index matches a linear scan on a 500 point cloud") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<EdgeCurve> edges;
  for (std::size_t e = 0; e < 50; ++e) {
    EdgeCurve c{e, {u(rng), u(rng)}, {u(rng), u(rng)}, {}};
    for (int k = 0; k < 10; ++k) c.controls.push_back({u(rng), u(rng)});
    edges.push_back(std::move(c));
  }
  const GraphLayout g(std::move(edges));
  for (double radius : {0.5, 3.0, 12.0}) {
    const SpatialIndex idx(g, radius);
    std::uniform_real_distribution<double> q(-10.0, 110.0);
    for (int n = 0; n < 100; ++n) {
      const Point2 p{q(rng), q(rng)};
      std::vector<ControlRef> expected;
      for (std::uint32_t e = 0; e < g.size(); ++e) {
        for (std::uint32_t k = 0; k < g.edge(e).controls.size(); ++k) {
          if (oracle::dist(p, g.edge(e).controls[k]) <= radius) expected.push_back({e, k});
        }
      }
      CHECK(idx.query(p) == expected);
    }
  }
}

TEST_CASE("grid detection equals the brute-force oracle") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    const GraphLayout g = oracle::random_layout(rng, 30, 12);
    for (double t : {0.5, 2.0, 6.0}) {
      for (double k : {0.2, 0.4, 0.9}) {
        const FlagMatrix expected = oracle::flags(g, t, k);
        CHECK(detect_bundles(g, t, k) == expected);
        CHECK(detect_bundles(g, t, k, {DetectionMethod::kBruteForce, 1}) == expected);
        CHECK(detect_bundles(g, t, k, {DetectionMethod::kGrid, 3}) == expected);
      }
    }
  }
}

TEST_CASE("grid detection when the grid cell grows past the threshold") {
  // Two far clusters with a tiny threshold force a coarser grid.
  std::vector<EdgeCurve> edges;
  for (std::size_t e = 0; e < 6; ++e) {
    const double base = e < 3 ? 0.0 : 1e6;
    EdgeCurve c{e, {base, 0}, {base + 1, 0}, {}};
    for (int k = 0; k < 5; ++k) c.controls.push_back({base + 0.01 * k, 1e-4 * static_cast<double>(e % 3)});
    edges.push_back(std::move(c));
  }
  const GraphLayout g(std::move(edges));
  const SpatialIndex idx(g, 1e-3);
  CHECK(idx.cell_size() > 1e-3);
  CHECK(detect_bundles(g, 1e-3, 0.4) == oracle::flags(g, 1e-3, 0.4));
}

TEST_CASE("monotone in T and K_min") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const GraphLayout g = oracle::random_layout(rng, 25, 12);
    FlagMatrix prev = detect_bundles(g, 0.25, 0.4);
    for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const FlagMatrix cur = detect_bundles(g, t, 0.4);
      CHECK(subset(prev, cur));
      prev = cur;
    }
    prev = detect_bundles(g, 3.0, 0.05);
    for (double k : {0.1, 0.3, 0.5, 0.75, 1.0}) {
      const FlagMatrix cur = detect_bundles(g, 3.0, k);
      CHECK(subset(cur, prev));
      prev = cur;
    }
  }
}

TEST_CASE("rigid motions keep the flags") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const GraphLayout g = oracle::random_layout(rng, 25, 10);
    const FlagMatrix base = detect_bundles(g, 2.5, 0.4);
    for (double angle : {0.3, 1.0, 2.5, -std::numbers::pi / 7}) {
      const GraphLayout moved = transformed(g, angle, {17.25, -3.5});
      CHECK(detect_bundles(moved, 2.5, 0.4) == base);
    }
  }
}

TEST_CASE("self-similarity on copied curves") {
  std::mt19937_64 rng(13);
  const GraphLayout g = oracle::random_layout(rng, 20, 12);
  for (const EdgeCurve& e : g.edges()) {
    const std::size_t k = required_run_length(e.controls.size(), e.controls.size(), 0.4);
    CHECK(detect_pair(e, e, 1e-9, k));
  }
}

TEST_CASE("weight matrix invariants") {
  std::mt19937_64 rng(21);
  const GraphLayout g = oracle::random_layout(rng, 30, 12);
  DetectionParams params;
  params.threshold = AbsoluteThreshold{2.0};
  params.epsilon = 0.25;
  const BundleWeightMatrix w = build_weight_matrix(g, params);
  CHECK(w.flags() == oracle::flags(g, 2.0, 0.4));
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(w.weight(i, i) == 0.0);
    CHECK_FALSE(w.bundled(i, i));
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (i == j) continue;
      CHECK(w.weight(i, j) == (w.bundled(i, j) ? 1.0 : 0.25));
      flagged += w.bundled(i, j) ? 1 : 0;
    }
  }
  CHECK(w.bundled_pair_count() == flagged);
  const auto pairs = w.bundled_pairs();
  CHECK(pairs.size() == flagged);
  CHECK(std::is_sorted(pairs.begin(), pairs.end()));
}

TEST_CASE("asymmetric flags are kept") {
  // A short edge lying inside a long one: every point of the short edge is
  // near, but the long edge has no run of length K near the short one.
  const EdgeCurve longer{0, {0, 0}, {10, 0}, {}};
  EdgeCurve l = longer;
  for (int k = 0; k <= 10; ++k) l.controls.push_back({static_cast<double>(k), 0});
  const EdgeCurve s{1, {4, 0}, {6, 0}, {{4, 0.1}, {5, 0.1}, {6, 0.1}, {6, 0.2}}};
  const GraphLayout g({l, s});
  const FlagMatrix f = detect_bundles(g, 0.6, 0.4);
  CHECK(f == oracle::flags(g, 0.6, 0.4));
  CHECK(f(1, 0));
  CHECK_FALSE(f(0, 1));
}

TEST_CASE("epsilon extremes") {
  std::mt19937_64 rng(1);
  const GraphLayout g = oracle::random_layout(rng, 12, 8);
  DetectionParams params;
  params.threshold = AbsoluteThreshold{1e-6};
  params.epsilon = 0.0;
  const BundleWeightMatrix none = build_weight_matrix(g, params);
  if (none.bundled_pair_count() == 0) CHECK(none.weights().isZero(0.0));

  params.epsilon = 1.0;
  params.threshold = AbsoluteThreshold{5.0};
  const BundleWeightMatrix all = build_weight_matrix(g, params);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(all.weight(i, j) == (i == j ? 0.0 : 1.0));
  }

  const GraphLayout apart({EdgeCurve{0, {0, 0}, {1, 0}, {{0, 0}, {1, 0}}},
                           EdgeCurve{1, {0, 9}, {1, 9}, {{0, 9}, {1, 9}}}});
  params.epsilon = 0.0;
  params.threshold = RelativeThreshold{0.03};
  CHECK(build_weight_matrix(apart, params).weights().isZero(0.0));
}

TEST_CASE("parameter validation") {
  const GraphLayout point({EdgeCurve{0, {1, 1}, {1, 1}, {{1, 1}}}});
  DetectionParams params;
  CHECK_THROWS_AS(params.resolve_threshold(point), ParameterError);
  try {
    params.resolve_threshold(point);
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("absolute threshold") != std::string::npos);
  }
  params.threshold = AbsoluteThreshold{0.5};
  CHECK(params.resolve_threshold(point) == 0.5);

  params.epsilon = 1.5;
  CHECK_THROWS_AS(params.validate(), ParameterError);
  params.epsilon = 0.5;
  params.k_min = 0.0;
  CHECK_THROWS_AS(params.validate(), ParameterError);
  params.k_min = 1.0;
  CHECK_NOTHROW(params.validate());
  params.threshold = RelativeThreshold{0.0};
  CHECK_THROWS_AS(params.validate(), ParameterError);
  params.threshold = AbsoluteThreshold{-1.0};
  CHECK_THROWS_AS(params.validate(), ParameterError);
  CHECK_THROWS_AS(detect_bundles(point, 0.0, 0.4), ParameterError);
}

TEST_CASE("dense size guard") {
  std::vector<EdgeCurve> edges;
  for (std::size_t e = 0; e <= kMaxDenseEdges; ++e) {
    edges.push_back({e, {0, 0}, {1, 0}, {{static_cast<double>(e), 0}}});
  }
  const GraphLayout g(std::move(edges));
  CHECK_THROWS_AS(detect_bundles(g, 1.0, 0.4), ParameterError);
}

TEST_CASE("ordered fixture flags at default T") {
  const Fixture f = make_ordered_bundles(6, 6, true, 0);
  DetectionParams params;
  const BundleWeightMatrix w = build_weight_matrix(f.layout, params);
  const double t = params.resolve_threshold(f.layout);
  CHECK(t == doctest::Approx(f.threshold).epsilon(1e-15));
  CHECK(w.flags() == oracle::flags(f.layout, t, 0.4));
  CHECK(w.flags() == ground_truth_flags(f.truth, f.layout.size()));
}
