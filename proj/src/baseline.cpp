#include "peacock/baseline.hpp"

#include <algorithm>

#include "peacock/error.hpp"

namespace peacock {

BaselineColorTable::BaselineColorTable(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.cols() != 3) throw ParameterError("baseline table must have 3 channels");
  if (!((values_.array() >= 0.0).all() && (values_.array() <= 1.0).all())) {
    throw ParameterError("baseline entries must lie in [0,1]");
  }
}

Eigen::MatrixXd baseline_raw_colors(const GraphLayout& layout) {
  Eigen::MatrixXd raw(layout.size(), 3);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const EdgeCurve& e = layout.edge(i);
    raw(i, 0) = std::min(e.v1.x, e.v2.x);
    raw(i, 1) = 0.0;
    raw(i, 2) = std::min(e.v1.y, e.v2.y);
  }
  return raw;
}

BaselineColorTable baseline_colors(const GraphLayout& layout) {
  Eigen::MatrixXd col = baseline_raw_colors(layout);
  for (Eigen::Index k = 0; k < col.cols(); ++k) {
    auto channel = col.col(k);
    const double lo = channel.minCoeff();
    const double hi = channel.maxCoeff();
    if (hi > lo) {
      channel = ((channel.array() - lo) / (hi - lo)).cwiseMax(0.0).cwiseMin(1.0).matrix();
    } else {
      channel.setConstant(0.5);
    }
  }
  return BaselineColorTable(std::move(col));
}

}  // namespace peacock
