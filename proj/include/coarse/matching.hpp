#pragma once

#include <optional>
#include <vector>

#include "coarse/ground_set.hpp"

namespace coarse {

/// Maximum bipartite matching via Hopcroft-Karp.
class BipartiteMatcher {
 public:
  BipartiteMatcher(Index num_left, Index num_right);

  void add_edge(Index left, Index right);
  /// Runs the solver and returns the matching size. Idempotent.
  Index solve();

  /// After solve: match of each left vertex, -1 when unmatched.
  const std::vector<Index>& left_match() const { return match_left_; }
  /// After solve: match of each right vertex, -1 when unmatched.
  const std::vector<Index>& right_match() const { return match_right_; }

  /// After solve: left vertices reachable from an unmatched left vertex by
  /// alternating paths. When the matching misses part of the left side,
  /// these vertices form a Hall violator: their joint neighborhood is
  /// strictly smaller than they are.
  std::vector<Index> alternating_reachable_left() const;

 private:
  bool bfs();
  bool dfs(Index u);

  Index num_left_, num_right_;
  std::vector<std::vector<Index>> adj_;
  std::vector<Index> match_left_, match_right_, dist_;
  bool solved_ = false;
};

/// Result of searching a system of distinct representatives for a family of
/// sets. Exactly one of selector / deficiency_witness is set: either one
/// representative per set, pairwise distinct, or a list of family indices
/// whose union is smaller than the subfamily.
struct SelectorResult {
  std::optional<std::vector<Index>> selector;
  std::optional<std::vector<Index>> deficiency_witness;
};

SelectorResult hall_selector(const std::vector<std::vector<Index>>& family);

}  // namespace coarse
