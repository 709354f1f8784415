#pragma once

#include <vector>

#include "coarse/ground_set.hpp"

namespace coarse {

/// Locator families of an isometry at one threshold: y_of[x] lists the
/// target points located by x, x_of[y] the source points located by y.
/// Consistency (y in y_of[x] iff x in x_of[y]) is assumed by consumers.
struct LocatorSets {
  std::vector<std::vector<Index>> y_of;
  std::vector<std::vector<Index>> x_of;
};

/// Simultaneous partitions extracted from locator data:
///  - b_pieces partition A = union over x of y_of[x] x y_of[x]; every piece
///    has singleton row and column sections, and meets each y_of[x]^2 in at
///    most one pair;
///  - x_pieces partition the source so that distinct members of a piece
///    have disjoint eta-locators;
///  - y_pieces mirror this on the target side.
struct ClaimPartition {
  double delta = 0;
  double eta = 0;
  std::vector<std::vector<IndexPair>> b_pieces;
  std::vector<std::vector<Index>> x_pieces;
  std::vector<std::vector<Index>> y_pieces;
  Index bound_n = 0;            // locator cardinality bound over both thresholds
  Index section_colors = 0;     // colors of the singleton-section coloring
  Index trace_colors = 0;       // colors of the per-x trace coloring
};

/// Builds the partitions from locator families at thresholds delta and
/// eta <= delta (so the eta families contain the delta families). The two
/// families must be symmetric in the sense above; piece structure follows
/// from greedy colorings of the induced conflict graphs, with the
/// singleton-section part obtained as a partial bijection decomposition.
ClaimPartition claim_partitions(const LocatorSets& at_delta, const LocatorSets& at_eta,
                                double delta, double eta);

}  // namespace coarse
