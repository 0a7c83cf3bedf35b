#include "peacock/pipeline.hpp"

#include <chrono>
#include <optional>

#include "json.hpp"
#include "peacock/error.hpp"

namespace peacock {
namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
auto run_stage(const char* name, Diagnostics& diag, Fn&& fn) {
  const auto start = Clock::now();
  try {
    auto out = fn();
    diag.timings.push_back({name, std::chrono::duration<double>(Clock::now() - start).count()});
    return out;
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

}  // namespace

PeacockResult run_peacock(const GraphLayout& layout, const DetectionParams& params,
                          const OptimizerConfig& cfg) {
  Diagnostics diag;
  const DetectionOptions detection{DetectionMethod::kGrid, cfg.threads};

  BundleWeightMatrix weights = run_stage("detect", diag, [&] {
    diag.threshold = params.resolve_threshold(layout);
    return BundleWeightMatrix(detect_bundles(layout, diag.threshold, params.k_min, detection),
                              params.epsilon);
  });
  diag.bundled_pairs = weights.bundled_pair_count();

  DissimilarityMatrix d = run_stage(
      "dissimilarity", diag, [&] { return build_dissimilarity_matrix(layout, cfg.threads); });

  OptimizeResult opt = run_stage("optimize", diag, [&] { return optimize(weights, d, cfg, layout); });
  diag.final_stress = opt.stress;
  diag.iterations = opt.iterations;

  ColorTable colors = run_stage(
      "normalize", diag, [&] { return normalize_colors(opt.embedding, weights, cfg.threads); });

  return {std::move(weights), std::move(d), std::move(opt.embedding), std::move(colors),
          std::move(diag)};
}

std::string color_dump_json(const Eigen::MatrixXd& colors, const std::vector<Rgb>& rgb,
                            double stress, std::size_t iterations) {
  nlohmann::ordered_json doc;
  doc["q"] = colors.cols();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < colors.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < colors.cols(); ++k) row.push_back(colors(i, k));
    rows.push_back(std::move(row));
  }
  doc["colors"] = std::move(rows);
  doc["rgb"] = rgb;
  doc["stress"] = stress;
  doc["iters"] = iterations;
  return doc.dump() + "\n";
}

ColorDump parse_color_dump(const std::string& json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    ColorDump dump;
    dump.q = doc.at("q").get<std::size_t>();
    const auto& rows = doc.at("colors");
    dump.colors.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dump.q));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != dump.q) throw ParseError("color dump: row " + std::to_string(i) + " has wrong width");
      for (std::size_t k = 0; k < dump.q; ++k) dump.colors(i, k) = rows[i][k].get<double>();
    }
    dump.rgb = doc.at("rgb").get<std::vector<Rgb>>();
    if (dump.rgb.size() != rows.size()) throw ParseError("color dump: 'rgb' and 'colors' differ in length");
    dump.stress = doc.at("stress").get<double>();
    dump.iterations = doc.at("iters").get<std::size_t>();
    return dump;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed color dump: ") + e.what());
  }
}

std::string bundle_dump_json(const BundleWeightMatrix& weights) {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& [i, j] : weights.bundled_pairs()) {
    nlohmann::ordered_json pair;
    pair["i"] = i;
    pair["j"] = j;
    pairs.push_back(std::move(pair));
  }
  return pairs.dump(2) + "\n";
}

}  // namespace peacock
