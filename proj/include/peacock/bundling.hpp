#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "peacock/model.hpp"

namespace peacock {

/// Largest edge count for which dense M x M matrices are built.
inline constexpr std::size_t kMaxDenseEdges = 20000;

/// Distance threshold given in layout units.
struct AbsoluteThreshold {
  double value = 0.0;
};

/// Distance threshold given as a fraction of max(width, height) of the layout.
struct RelativeThreshold {
  double fraction = 0.03;
};

struct DetectionParams {
  std::variant<AbsoluteThreshold, RelativeThreshold> threshold = RelativeThreshold{};
  double k_min = 0.4;
  // Weight of pairs that are not bundled: 0 is purely local, 1 purely global.
  double epsilon = 0.001;

  /// Throws ParameterError for out-of-range values.
  void validate() const;

  /// The absolute threshold T for this layout. Throws ParameterError when a
  /// relative threshold resolves to zero (degenerate extent).
  double resolve_threshold(const GraphLayout& layout) const;
};

using WeightMatrix = Eigen::MatrixXd;
using FlagMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Pairwise bundling outcome and the stress weights derived from it.
/// flags(i, j) is directional: K consecutive control points of edge i lie
/// near edge j. The matrix need not be symmetric.
class BundleWeightMatrix {
 public:
  /// Weights are 1 where flagged, epsilon elsewhere, 0 on the diagonal. The
  /// diagonal of `flags` is cleared.
  BundleWeightMatrix(FlagMatrix flags, double epsilon);

  std::size_t size() const { return static_cast<std::size_t>(flags_.rows()); }
  double epsilon() const { return epsilon_; }
  const WeightMatrix& weights() const { return weights_; }
  const FlagMatrix& flags() const { return flags_; }

  double weight(std::size_t i, std::size_t j) const { return weights_(i, j); }
  bool bundled(std::size_t i, std::size_t j) const { return flags_(i, j); }

  /// True in either direction.
  bool bundled_either(std::size_t i, std::size_t j) const { return flags_(i, j) || flags_(j, i); }

  std::size_t bundled_pair_count() const;

  /// Flagged ordered pairs (i, j), sorted lexicographically.
  std::vector<std::pair<std::size_t, std::size_t>> bundled_pairs() const;

 private:
  FlagMatrix flags_;
  WeightMatrix weights_;
  double epsilon_;
};

/// K_ij = max(1, floor(max(C_i, C_j) * K_min)).
std::size_t required_run_length(std::size_t c_i, std::size_t c_j, double k_min);

/// Direct evaluation of the pairwise criterion: true iff some run of
/// `run_length` consecutive control points of edge_i each have a control
/// point of edge_j within distance <= threshold.
bool detect_pair(const EdgeCurve& edge_i, const EdgeCurve& edge_j, double threshold,
                 std::size_t run_length);

enum class DetectionMethod {
  kGrid,        // uniform-grid proximity queries
  kBruteForce,  // detect_pair on every ordered pair
};

struct DetectionOptions {
  DetectionMethod method = DetectionMethod::kGrid;
  unsigned threads = 1;
};

/// Flags for every ordered pair at an absolute threshold.
FlagMatrix detect_bundles(const GraphLayout& layout, double threshold, double k_min,
                          const DetectionOptions& options = {});

BundleWeightMatrix build_weight_matrix(const GraphLayout& layout, const DetectionParams& params,
                                       const DetectionOptions& options = {});

}  // namespace peacock
