#include "peacock/bundling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "peacock/error.hpp"
#include "peacock/parallel.hpp"
#include "peacock/spatial_index.hpp"

namespace peacock {

void DetectionParams::validate() const {
  if (const auto* abs = std::get_if<AbsoluteThreshold>(&threshold)) {
    if (!(abs->value > 0.0) || !std::isfinite(abs->value)) {
      throw ParameterError("absolute threshold must be positive and finite");
    }
  } else {
    const double f = std::get<RelativeThreshold>(threshold).fraction;
    if (!(f > 0.0 && f <= 1.0)) throw ParameterError("threshold fraction must be in (0,1]");
  }
  if (!(k_min > 0.0 && k_min <= 1.0)) throw ParameterError("k_min must be in (0,1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must be in [0,1]");
}

double DetectionParams::resolve_threshold(const GraphLayout& layout) const {
  validate();
  if (const auto* abs = std::get_if<AbsoluteThreshold>(&threshold)) return abs->value;
  const double t = std::get<RelativeThreshold>(threshold).fraction * layout.extent().max_side();
  if (!(t > 0.0)) {
    throw ParameterError(
        "layout has zero extent so a relative threshold resolves to 0; "
        "give an absolute threshold instead");
  }
  return t;
}

BundleWeightMatrix::BundleWeightMatrix(FlagMatrix flags, double epsilon)
    : flags_(std::move(flags)), epsilon_(epsilon) {
  if (flags_.rows() != flags_.cols()) throw ParameterError("flag matrix must be square");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must be in [0,1]");
  flags_.diagonal().setConstant(false);
  const Eigen::Index m = flags_.rows();
  weights_ = flags_.select(WeightMatrix::Ones(m, m), WeightMatrix::Constant(m, m, epsilon));
  weights_.diagonal().setZero();
}

std::size_t BundleWeightMatrix::bundled_pair_count() const {
  return static_cast<std::size_t>(flags_.count());
}

std::vector<std::pair<std::size_t, std::size_t>> BundleWeightMatrix::bundled_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(bundled_pair_count());
  for (Eigen::Index i = 0; i < flags_.rows(); ++i) {
    for (Eigen::Index j = 0; j < flags_.cols(); ++j) {
      if (flags_(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t required_run_length(std::size_t c_i, std::size_t c_j, double k_min) {
  // The guard absorbs products such as 100 * 0.29 = 28.999999999999996.
  const double scaled = static_cast<double>(std::max(c_i, c_j)) * k_min;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(scaled + 1e-9)));
}

bool detect_pair(const EdgeCurve& edge_i, const EdgeCurve& edge_j, double threshold,
                 std::size_t run_length) {
  if (run_length == 0 || edge_i.controls.size() < run_length) return false;
  std::size_t run = 0;
  for (const Point2& z : edge_i.controls) {
    const bool near = std::any_of(edge_j.controls.begin(), edge_j.controls.end(),
                                  [&](const Point2& w) { return distance(z, w) <= threshold; });
    run = near ? run + 1 : 0;
    if (run >= run_length) return true;
  }
  return false;
}

namespace {

void check_dense_size(std::size_t m) {
  if (m > kMaxDenseEdges) {
    throw ParameterError("layout has " + std::to_string(m) + " edges; dense matrices support at most " +
                         std::to_string(kMaxDenseEdges));
  }
}

FlagMatrix detect_brute_force(const GraphLayout& layout, double threshold, double k_min,
                              unsigned threads) {
  const std::size_t m = layout.size();
  FlagMatrix flags = FlagMatrix::Constant(m, m, false);
  parallel_for(m, threads, [&](std::size_t i) {
    const EdgeCurve& ei = layout.edge(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const EdgeCurve& ej = layout.edge(j);
      const std::size_t k = required_run_length(ei.controls.size(), ej.controls.size(), k_min);
      flags(i, j) = detect_pair(ei, ej, threshold, k);
    }
  });
  return flags;
}

FlagMatrix detect_with_grid(const GraphLayout& layout, double threshold, double k_min,
                            unsigned threads) {
  const std::size_t m = layout.size();
  const SpatialIndex index(layout, threshold);
  FlagMatrix flags = FlagMatrix::Constant(m, m, false);

  parallel_for(m, threads, [&](std::size_t i) {
    const EdgeCurve& ei = layout.edge(i);
    const std::size_t c_i = ei.controls.size();
    // last_near[j]: latest control index of i found near edge j (or -1);
    // run[j]: length of the consecutive streak ending there.
    std::vector<std::int64_t> last_near(m, -1);
    std::vector<std::size_t> run(m, 0);
    for (std::size_t r = 0; r < c_i; ++r) {
      const auto ri = static_cast<std::int64_t>(r);
      index.for_each_near(ei.controls[r], [&](ControlRef ref) {
        const std::size_t j = ref.edge;
        if (j == i || last_near[j] == ri) return;
        run[j] = last_near[j] == ri - 1 ? run[j] + 1 : 1;
        last_near[j] = ri;
        if (!flags(i, j) &&
            run[j] >= required_run_length(c_i, layout.edge(j).controls.size(), k_min)) {
          flags(i, j) = true;
        }
      });
    }
  });
  return flags;
}

}  // namespace

FlagMatrix detect_bundles(const GraphLayout& layout, double threshold, double k_min,
                          const DetectionOptions& options) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw ParameterError("threshold must be positive and finite");
  }
  if (!(k_min > 0.0 && k_min <= 1.0)) throw ParameterError("k_min must be in (0,1]");
  check_dense_size(layout.size());
  return options.method == DetectionMethod::kGrid
             ? detect_with_grid(layout, threshold, k_min, options.threads)
             : detect_brute_force(layout, threshold, k_min, options.threads);
}

BundleWeightMatrix build_weight_matrix(const GraphLayout& layout, const DetectionParams& params,
                                       const DetectionOptions& options) {
  const double threshold = params.resolve_threshold(layout);
  return BundleWeightMatrix(detect_bundles(layout, threshold, params.k_min, options),
                            params.epsilon);
}

}  // namespace peacock
