#pragma once

#include <Eigen/Core>

#include "peacock/model.hpp"

namespace peacock {

/// Comparison coloring that writes endpoint positions straight into color
/// channels: (min x, 0, min y) of each edge's endpoints, each channel then
/// min-max scaled into [0, 1] over all edges. A channel without spread
/// (always the green one) maps to 0.5.
class BaselineColorTable {
 public:
  explicit BaselineColorTable(Eigen::MatrixXd values);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(std::size_t i, std::size_t k) const { return values_(i, k); }

 private:
  Eigen::MatrixXd values_;
};

/// The unnormalized M x 3 matrix.
Eigen::MatrixXd baseline_raw_colors(const GraphLayout& layout);

BaselineColorTable baseline_colors(const GraphLayout& layout);

}  // namespace peacock
