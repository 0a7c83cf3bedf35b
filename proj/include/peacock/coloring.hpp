#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "peacock/bundling.hpp"
#include "peacock/dissimilarity.hpp"
#include "peacock/model.hpp"

namespace peacock {

/// M x q optimizer state, one row per edge. q is 1, 2 or 3.
class ColorEmbedding {
 public:
  /// Throws ParameterError for q outside 1..3 or non-finite entries.
  explicit ColorEmbedding(Eigen::MatrixXd values);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(std::size_t i, std::size_t k) const { return values_(i, k); }

  friend bool operator==(const ColorEmbedding& a, const ColorEmbedding& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  Eigen::MatrixXd values_;
};

/// Normalized colors: M x q, every entry in [0, 1].
class ColorTable {
 public:
  explicit ColorTable(Eigen::MatrixXd values);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(std::size_t i, std::size_t k) const { return values_(i, k); }

 private:
  Eigen::MatrixXd values_;
};

enum class InitMethod {
  // Edge midpoints projected to q dimensions and standardized.
  kEndpointProjection,
  kSeededRandom,
};

struct OptimizerConfig {
  std::size_t dims = 1;
  std::size_t max_iters = 500;
  // Stop once (previous - current) / previous stress drops below this.
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  InitMethod init = InitMethod::kEndpointProjection;
  unsigned threads = 1;

  void validate() const;
};

/// Weighted stress over ordered pairs:
///   sum_{i != j} w_ij (d_ij - |y_i - y_j|)^2
/// Asymmetric weights enter each direction as given.
double stress(const ColorEmbedding& y, const BundleWeightMatrix& w, const DissimilarityMatrix& d,
              unsigned threads = 1);

/// Prepared SMACOF problem. The ordered-pair weights are folded into the
/// symmetric weights w_ij + w_ji, which leaves the stress unchanged, and the
/// pseudo-inverse of the weighted Laplacian is factored once per connected
/// component of the weight graph.
class StressMajorizer {
 public:
  /// Throws OptimizerError when every weight is zero.
  StressMajorizer(const BundleWeightMatrix& w, const DissimilarityMatrix& d, unsigned threads = 1);

  /// One Guttman transform. Never increases stress. Coincident rows
  /// contribute nothing to the d_ij / |y_i - y_j| term.
  ColorEmbedding step(const ColorEmbedding& y) const;

  double stress(const ColorEmbedding& y) const;

  std::size_t size() const { return static_cast<std::size_t>(sym_weights_.rows()); }
  std::size_t component_count() const { return components_; }

 private:
  const BundleWeightMatrix* w_;
  const DissimilarityMatrix* d_;
  unsigned threads_;
  Eigen::MatrixXd sym_weights_;
  Eigen::MatrixXd laplacian_pinv_;
  std::size_t components_ = 0;
};

ColorEmbedding smacof_step(const ColorEmbedding& y, const BundleWeightMatrix& w,
                           const DissimilarityMatrix& d);

/// Starting configurations for the optimizer. Endpoint projection yields
/// one start for q = 2, 3 and four for q = 1 (midpoints projected onto
/// directions at 0, 45, 90 and 135 degrees; the first is the x coordinate).
/// Seeded-random yields one standard normal start.
std::vector<ColorEmbedding> initial_embeddings(const GraphLayout& layout,
                                               const OptimizerConfig& cfg);

ColorEmbedding random_embedding(std::size_t m, std::size_t dims, std::uint64_t seed);

struct OptimizeResult {
  ColorEmbedding embedding;
  double stress = 0.0;
  std::size_t iterations = 0;
  // Stress of the start followed by the stress after every step.
  std::vector<double> stress_trace;
  // Index of the start the result came from.
  std::size_t start_index = 0;
};

/// Runs SMACOF from each start and keeps the lowest final stress (earliest
/// start on ties).
OptimizeResult optimize(const BundleWeightMatrix& w, const DissimilarityMatrix& d,
                        const OptimizerConfig& cfg, std::span<const ColorEmbedding> starts);

/// Starts from initial_embeddings(layout, cfg).
OptimizeResult optimize(const BundleWeightMatrix& w, const DissimilarityMatrix& d,
                        const OptimizerConfig& cfg, const GraphLayout& layout);

/// Without a layout only seeded-random initialization is possible; throws
/// ParameterError otherwise.
OptimizeResult optimize(const BundleWeightMatrix& w, const DissimilarityMatrix& d,
                        const OptimizerConfig& cfg);

/// Rescales each edge's embedding against its bundle neighbourhood (itself
/// plus every edge bundled with it in either direction) so the neighbourhood
/// spans [0, 1] in every dimension. Edges without partners use the global
/// range; a dimension with no spread maps to 0.5.
ColorTable normalize_colors(const ColorEmbedding& y, const BundleWeightMatrix& w,
                            unsigned threads = 1);

using Rgb = std::array<double, 3>;

/// Blue -> red -> yellow, piecewise linear over [0, 1].
Rgb gradient_color(double t);

/// q = 1: gradient; q = 2: (R, B) with G = 0; q = 3: RGB as is.
std::vector<Rgb> colors_to_display(const ColorTable& table);

}  // namespace peacock
