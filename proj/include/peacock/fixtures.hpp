#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "peacock/bundling.hpp"
#include "peacock/model.hpp"

namespace peacock {

/// Known bundle structure of a generated layout.
struct GroundTruth {
  // Edge ids of each bundle.
  std::vector<std::vector<std::size_t>> bundles;
  // order[b][k]: rank of edge bundles[b][k] in connection order.
  std::vector<std::vector<std::size_t>> order;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct Fixture {
  GraphLayout layout;
  GroundTruth truth;
  // Threshold and K_min at which the ground truth is exact.
  double threshold = 0.0;
  double k_min = 0.4;
};

/// Bundle b of the ground truth as an M x M flag pattern: every ordered pair
/// inside one bundle is flagged, nothing else.
FlagMatrix ground_truth_flags(const GroundTruth& truth, std::size_t edge_count);

/// `groups` node groups on a circle, paired into groups/2 bundles. Each
/// bundle's edges leave their source group in order, share a corridor of ten
/// collinear waypoints (jittered by less than T/4), and arrive at the target
/// group in the same order, or in reverse for the last bundle when
/// `reverse_last` is set. Corridors of different bundles stay more than 2T
/// apart, with T = 3% of the larger layout side.
Fixture make_ordered_bundles(std::size_t groups, std::size_t edges_per_bundle, bool reverse_last,
                             std::uint64_t seed);

/// `bundles` corridors running along diameters of a circle, all crossing at
/// the centre where each corridor has one waypoint. At K_min = 0.4 only the
/// intra-bundle pairs are flagged; with runs of length 1 the shared centre
/// also flags cross-bundle pairs.
Fixture make_crossing_bundles(std::size_t bundles, std::size_t edges_per_bundle,
                              std::uint64_t seed);

/// Sidecar format: {"bundles": [[ids]], "order": [[ranks]]}.
std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth parse_ground_truth(const std::string& json_text);

}  // namespace peacock
