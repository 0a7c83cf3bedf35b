#pragma once

#include <Eigen/Core>

#include "peacock/model.hpp"

namespace peacock {

/// Symmetric M x M endpoint dissimilarities with zero diagonal.
using DissimilarityMatrix = Eigen::MatrixXd;

/// Sum of endpoint distances under the better of the two endpoint pairings,
/// so the value ignores edge direction.
double endpoint_dissimilarity(const EdgeCurve& edge_i, const EdgeCurve& edge_j);

DissimilarityMatrix build_dissimilarity_matrix(const GraphLayout& layout, unsigned threads = 1);

}  // namespace peacock
