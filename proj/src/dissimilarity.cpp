#include "peacock/dissimilarity.hpp"

#include <algorithm>
#include <string>

#include "peacock/bundling.hpp"
#include "peacock/error.hpp"
#include "peacock/parallel.hpp"

namespace peacock {

double endpoint_dissimilarity(const EdgeCurve& edge_i, const EdgeCurve& edge_j) {
  const double straight = distance(edge_i.v1, edge_j.v1) + distance(edge_i.v2, edge_j.v2);
  const double crossed = distance(edge_i.v1, edge_j.v2) + distance(edge_i.v2, edge_j.v1);
  return std::min(straight, crossed);
}

DissimilarityMatrix build_dissimilarity_matrix(const GraphLayout& layout, unsigned threads) {
  const std::size_t m = layout.size();
  if (m > kMaxDenseEdges) {
    throw ParameterError("layout has " + std::to_string(m) + " edges; dense matrices support at most " +
                         std::to_string(kMaxDenseEdges));
  }
  DissimilarityMatrix d = DissimilarityMatrix::Zero(m, m);
  // Upper triangle first, then mirror, so symmetry is exact.
  parallel_for(m, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      d(i, j) = endpoint_dissimilarity(layout.edge(i), layout.edge(j));
    }
  });
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) d(j, i) = d(i, j);
  }
  return d;
}

}  // namespace peacock
