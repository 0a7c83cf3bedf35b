#include "doctest.h"
#include "oracles.hpp"
#include "peacock/baseline.hpp"
#include "peacock/error.hpp"
#include "peacock/fixtures.hpp"
#include "peacock/pipeline.hpp"

using namespace peacock;

TEST_CASE("ordered fixture colors follow connection order") {
  const Fixture f = make_ordered_bundles(6, 6, true, 0);
  const PeacockResult r = run_peacock(f.layout, DetectionParams{}, OptimizerConfig{});
  for (std::size_t b = 0; b < f.truth.bundles.size(); ++b) {
    std::vector<double> colors, order;
    for (std::size_t k = 0; k < f.truth.bundles[b].size(); ++k) {
      colors.push_back(r.colors(f.truth.bundles[b][k], 0));
      order.push_back(static_cast<double>(f.truth.order[b][k]));
    }
    CHECK(std::abs(oracle::spearman(colors, order)) >= 0.9);
    CHECK(*std::min_element(colors.begin(), colors.end()) <= 0.05);
    CHECK(*std::max_element(colors.begin(), colors.end()) >= 0.95);
  }
}

TEST_CASE("diagnostics") {
  const Fixture f = make_ordered_bundles(4, 5, false, 2);
  const PeacockResult r = run_peacock(f.layout, DetectionParams{}, OptimizerConfig{});
  const Diagnostics& diag = r.diagnostics;
  CHECK(diag.bundled_pairs == static_cast<std::size_t>(r.weights.flags().count()));
  CHECK(diag.bundled_pairs == 2 * 5 * 4);
  CHECK(diag.threshold == DetectionParams{}.resolve_threshold(f.layout));
  CHECK(diag.final_stress == stress(r.embedding, r.weights, r.dissimilarities));
  CHECK(diag.iterations >= 1);
  REQUIRE(diag.timings.size() == 4);
  const char* stages[] = {"detect", "dissimilarity", "optimize", "normalize"};
  for (std::size_t s = 0; s < 4; ++s) {
    CHECK(diag.timings[s].stage == stages[s]);
    CHECK(diag.timings[s].seconds >= 0.0);
  }
}

TEST_CASE("global mode beats the baseline table") {
  const Fixture f = make_ordered_bundles(6, 6, true, 0);
  DetectionParams params;
  params.epsilon = 1.0;
  OptimizerConfig cfg;
  cfg.dims = 3;
  const PeacockResult r = run_peacock(f.layout, params, cfg);
  const double base = stress(ColorEmbedding(baseline_colors(f.layout).values()), r.weights, r.dissimilarities);
  CHECK(r.diagnostics.final_stress < base);
}

TEST_CASE("end-to-end determinism") {
  const Fixture f = make_crossing_bundles(3, 4, 1);
  OptimizerConfig cfg;
  cfg.dims = 2;
  const PeacockResult a = run_peacock(f.layout, DetectionParams{}, cfg);
  cfg.threads = 4;
  const PeacockResult b = run_peacock(f.layout, DetectionParams{}, cfg);
  CHECK(a.colors.values() == b.colors.values());
  CHECK(a.embedding == b.embedding);
  CHECK(a.weights.flags() == b.weights.flags());
}

TEST_CASE("failures name their stage") {
  const GraphLayout apart({EdgeCurve{0, {0, 0}, {1, 0}, {{0, 0}, {1, 0}}},
                           EdgeCurve{1, {0, 9}, {1, 9}, {{0, 9}, {1, 9}}}});
  DetectionParams params;
  params.epsilon = 0.0;
  try {
    run_peacock(apart, params, OptimizerConfig{});
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "optimize");
    CHECK(std::string(e.what()).starts_with("optimize: "));
  }

  const GraphLayout point({EdgeCurve{0, {1, 1}, {1, 1}, {{1, 1}}}});
  try {
    run_peacock(point, DetectionParams{}, OptimizerConfig{});
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "detect");
  }
}

TEST_CASE("color dump round trip") {
  Eigen::MatrixXd colors(2, 2);
  colors << 0.0, 0.25, 1.0, 0.5;
  const std::vector<Rgb> rgb{{0.0, 0.0, 0.25}, {1.0, 0.0, 0.5}};
  const std::string text = color_dump_json(colors, rgb, 1.5, 7);
  CHECK(text == "{\"q\":2,\"colors\":[[0.0,0.25],[1.0,0.5]],\"rgb\":[[0.0,0.0,0.25],[1.0,0.0,0.5]],"
                "\"stress\":1.5,\"iters\":7}\n");
  const ColorDump dump = parse_color_dump(text);
  CHECK(dump.q == 2);
  CHECK(dump.colors == colors);
  CHECK(dump.rgb == rgb);
  CHECK(dump.stress == 1.5);
  CHECK(dump.iterations == 7);
  CHECK_THROWS_AS(parse_color_dump("{\"q\":1}"), ParseError);
}

TEST_CASE("bundle dump") {
  FlagMatrix f = FlagMatrix::Constant(3, 3, false);
  f(2, 0) = f(0, 1) = true;
  const std::string text = bundle_dump_json(BundleWeightMatrix(f, 0.0));
  CHECK(text.find("\"i\": 0") < text.find("\"i\": 2"));
}
