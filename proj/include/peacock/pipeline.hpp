#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "peacock/bundling.hpp"
#include "peacock/coloring.hpp"
#include "peacock/dissimilarity.hpp"
#include "peacock/model.hpp"

namespace peacock {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct Diagnostics {
  double threshold = 0.0;
  double final_stress = 0.0;
  std::size_t iterations = 0;
  std::size_t bundled_pairs = 0;
  std::vector<StageTiming> timings;
};

struct PeacockResult {
  BundleWeightMatrix weights;
  DissimilarityMatrix dissimilarities;
  ColorEmbedding embedding;
  ColorTable colors;
  Diagnostics diagnostics;
};

/// detect -> dissimilarity -> optimize -> normalize. Stage failures are
/// rethrown as StageError naming the stage ("detect", "dissimilarity",
/// "optimize", "normalize").
PeacockResult run_peacock(const GraphLayout& layout, const DetectionParams& params,
                          const OptimizerConfig& cfg);

/// Color dump: {"q", "colors", "rgb", "stress", "iters"}.
std::string color_dump_json(const Eigen::MatrixXd& colors, const std::vector<Rgb>& rgb,
                            double stress, std::size_t iterations);

struct ColorDump {
  std::size_t q = 0;
  Eigen::MatrixXd colors;
  std::vector<Rgb> rgb;
  double stress = 0.0;
  std::size_t iterations = 0;
};

ColorDump parse_color_dump(const std::string& json_text);

/// Flagged ordered pairs as [{"i": .., "j": ..}, ...], sorted.
std::string bundle_dump_json(const BundleWeightMatrix& weights);

}  // namespace peacock
