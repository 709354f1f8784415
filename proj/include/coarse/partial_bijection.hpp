#pragma once

#include <vector>

#include "coarse/relation.hpp"

namespace coarse {

/// Relation with all row and column sections of size at most one; the graph
/// of a partially defined injective map.
class PartialBijection {
 public:
  explicit PartialBijection(std::vector<IndexPair> pairs);

  const std::vector<IndexPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

 private:
  std::vector<IndexPair> pairs_;  // sorted
};

enum class DecomposeStrategy {
  /// Bipartite edge coloring by repeated matchings that saturate every
  /// vertex of current maximum degree; yields exactly max(n_r, n_c) pieces.
  edge_coloring,
  /// First-fit placement; at most n_r + n_c - 1 pieces. Kept for
  /// cross-validation against the sharp method.
  greedy,
};

/// Splits a relation with section bounds (n_r, n_c) into disjoint partial
/// bijections whose union is the relation.
std::vector<PartialBijection> decompose_partial_bijections(
    const Relation& e, DecomposeStrategy strategy = DecomposeStrategy::edge_coloring);

}  // namespace coarse
