#pragma once

#include <vector>

#include "coarse/ground_set.hpp"

namespace coarse {

struct Coloring {
  std::vector<Index> color;  // per vertex
  Index num_colors = 0;
};

/// Proper coloring with at most degree_bound colors, computed greedily in
/// vertex index order with the smallest available color. Requires every
/// vertex degree to be strictly below degree_bound; a violation is
/// reported with the offending vertex. Edges may appear in either or both
/// orientations; self-loops are rejected.
Coloring greedy_coloring(Index num_vertices, const std::vector<IndexPair>& edges,
                         Index degree_bound);

}  // namespace coarse
