#include "coarse/partial_bijection.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "coarse/matching.hpp"

namespace coarse {

PartialBijection::PartialBijection(std::vector<IndexPair> pairs)
    : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  std::set<Index> firsts, seconds;
  for (const auto& [a, b] : pairs_) {
    if (!firsts.insert(a).second)
      throw std::invalid_argument("PartialBijection: repeated first coordinate " +
                                  std::to_string(a));
    if (!seconds.insert(b).second)
      throw std::invalid_argument("PartialBijection: repeated second coordinate " +
                                  std::to_string(b));
  }
}

namespace {

/// One round of the edge-coloring decomposition: a matching inside `edges`
/// covering every vertex of current maximum degree. Builds one matching
/// saturating the max-degree left vertices, one saturating the max-degree
/// right vertices, and resolves their union component by component.
std::vector<IndexPair> saturating_matching(Index n, const std::vector<IndexPair>& edges) {
  std::vector<Index> deg_left(n, 0), deg_right(n, 0);
  for (const auto& [x, y] : edges) {
    ++deg_left[x];
    ++deg_right[y];
  }
  Index max_deg = 0;
  for (Index v = 0; v < n; ++v)
    max_deg = std::max({max_deg, deg_left[v], deg_right[v]});

  std::vector<char> dl(n, 0), dr(n, 0);
  for (Index v = 0; v < n; ++v) {
    dl[v] = deg_left[v] == max_deg;
    dr[v] = deg_right[v] == max_deg;
  }

  // m1 saturates max-degree left vertices, m2 the right ones. Saturation is
  // guaranteed: any k max-degree vertices emit k * max_deg edges, which no
  // fewer than k neighbors can absorb.
  std::vector<Index> m1_of_left(n, -1), m1_of_right(n, -1);
  std::vector<Index> m2_of_left(n, -1), m2_of_right(n, -1);
  {
    BipartiteMatcher matcher(n, n);
    Index demand = 0;
    for (const auto& [x, y] : edges)
      if (dl[x]) matcher.add_edge(x, y);
    for (Index v = 0; v < n; ++v) demand += dl[v];
    if (matcher.solve() != demand)
      throw std::logic_error("decompose: left saturation failed");
    for (Index v = 0; v < n; ++v)
      if (matcher.left_match()[v] >= 0) {
        m1_of_left[v] = matcher.left_match()[v];
        m1_of_right[matcher.left_match()[v]] = v;
      }
  }
  {
    BipartiteMatcher matcher(n, n);
    Index demand = 0;
    for (const auto& [x, y] : edges)
      if (dr[y]) matcher.add_edge(x, y);
    for (Index v = 0; v < n; ++v) demand += dr[v];
    if (matcher.solve() != demand)
      throw std::logic_error("decompose: right saturation failed");
    for (Index v = 0; v < n; ++v)
      if (matcher.left_match()[v] >= 0) {
        m2_of_left[v] = matcher.left_match()[v];
        m2_of_right[matcher.left_match()[v]] = v;
      }
  }

  // Union of the two matchings: vertices 0..n-1 left, n..2n-1 right, every
  // vertex incident to at most one edge of each, so components are paths
  // and cycles alternating between the matchings.
  const Index total = 2 * n;
  auto partner = [&](Index v, int which) -> Index {
    if (v < n) {
      const Index y = which == 1 ? m1_of_left[v] : m2_of_left[v];
      return y < 0 ? -1 : y + n;
    }
    const Index x = which == 1 ? m1_of_right[v - n] : m2_of_right[v - n];
    return x;
  };
  auto in_demand = [&](Index v) { return v < n ? dl[v] == 1 : dr[v - n] == 1; };

  std::vector<char> visited(total, 0);
  std::vector<IndexPair> selected;
  auto emit = [&](Index v, Index w) {  // edge between sides, in either order
    if (v < n)
      selected.emplace_back(v, w - n);
    else
      selected.emplace_back(w, v - n);
  };

  auto walk_path = [&](Index start) {
    // Ordered edge list (vertex sequence + matching ids) starting at an
    // endpoint, then pick the matching demanded by a max-degree endpoint.
    std::vector<std::pair<IndexPair, int>> path;  // ((v,w), which)
    Index prev = -1, cur = start;
    visited[cur] = 1;
    int arrived_by = 0;
    while (true) {
      Index next = -1;
      int used = 0;
      for (int which : {1, 2}) {
        if (which == arrived_by) continue;
        const Index cand = partner(cur, which);
        if (cand >= 0 && cand != prev) {
          next = cand;
          used = which;
          break;
        }
      }
      if (next < 0) break;
      path.push_back({{cur, next}, used});
      prev = cur;
      cur = next;
      arrived_by = used;
      if (visited[cur]) break;  // closed a cycle
      visited[cur] = 1;
    }
    if (path.empty()) return;
    int pick;
    const bool cycle = path.back().first.second == start;
    if (cycle) {
      pick = 1;
    } else if (in_demand(start)) {
      pick = path.front().second;
      if (in_demand(cur) && path.back().second != pick)
        throw std::logic_error("decompose: conflicting path endpoints");
    } else if (in_demand(cur)) {
      pick = path.back().second;
    } else {
      pick = path.front().second;
    }
    for (const auto& [edge, which] : path)
      if (which == pick) emit(edge.first, edge.second);
  };

  for (Index v = 0; v < total; ++v) {
    if (visited[v]) continue;
    const Index p1 = partner(v, 1), p2 = partner(v, 2);
    const int degree = (p1 >= 0) + (p2 >= 0);
    if (degree == 1) walk_path(v);
  }
  for (Index v = 0; v < total; ++v) {  // remaining components are cycles
    if (visited[v]) continue;
    if (partner(v, 1) >= 0) walk_path(v);
  }

  std::sort(selected.begin(), selected.end());
  return selected;
}

std::vector<PartialBijection> decompose_greedy(const Relation& e) {
  const Index n = e.domain().size();
  std::vector<std::vector<char>> used_x, used_y;
  std::vector<std::vector<IndexPair>> pieces;
  for (const auto& [x, y] : e.pairs()) {
    std::size_t slot = 0;
    while (slot < pieces.size() && (used_x[slot][x] || used_y[slot][y])) ++slot;
    if (slot == pieces.size()) {
      pieces.emplace_back();
      used_x.emplace_back(n, 0);
      used_y.emplace_back(n, 0);
    }
    pieces[slot].emplace_back(x, y);
    used_x[slot][x] = 1;
    used_y[slot][y] = 1;
  }
  std::vector<PartialBijection> out;
  out.reserve(pieces.size());
  for (auto& p : pieces) out.emplace_back(std::move(p));
  return out;
}

}  // namespace

std::vector<PartialBijection> decompose_partial_bijections(const Relation& e,
                                                           DecomposeStrategy strategy) {
  if (strategy == DecomposeStrategy::greedy) return decompose_greedy(e);

  const Index n = e.domain().size();
  std::vector<IndexPair> remaining = e.pairs();
  std::vector<PartialBijection> out;
  while (!remaining.empty()) {
    std::vector<IndexPair> piece = saturating_matching(n, remaining);
    if (piece.empty()) throw std::logic_error("decompose: empty round");
    std::vector<IndexPair> rest;
    rest.reserve(remaining.size() - piece.size());
    std::set_difference(remaining.begin(), remaining.end(), piece.begin(), piece.end(),
                        std::back_inserter(rest));
    remaining = std::move(rest);
    out.emplace_back(std::move(piece));
  }
  return out;
}

}  // namespace coarse
