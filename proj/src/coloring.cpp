#include "coarse/coloring.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace coarse {

Coloring greedy_coloring(Index num_vertices, const std::vector<IndexPair>& edges,
                         Index degree_bound) {
  if (degree_bound <= 0)
    throw std::invalid_argument("greedy_coloring: degree bound must be positive");
  std::vector<std::vector<Index>> adj(num_vertices);
  {
    std::vector<IndexPair> canon;
    canon.reserve(edges.size());
    for (const auto& [a, b] : edges) {
      if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices)
        throw std::out_of_range("greedy_coloring: vertex out of range");
      if (a == b)
        throw std::invalid_argument("greedy_coloring: self-loop at vertex " +
                                    std::to_string(a));
      canon.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    for (const auto& [a, b] : canon) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  for (Index v = 0; v < num_vertices; ++v)
    if (static_cast<Index>(adj[v].size()) >= degree_bound)
      throw std::invalid_argument("greedy_coloring: vertex " + std::to_string(v) +
                                  " has degree " + std::to_string(adj[v].size()) +
                                  ", not below the bound " +
                                  std::to_string(degree_bound));

  Coloring out;
  out.color.assign(num_vertices, -1);
  std::vector<char> used(degree_bound, 0);
  for (Index v = 0; v < num_vertices; ++v) {
    for (Index w : adj[v])
      if (out.color[w] >= 0) used[out.color[w]] = 1;
    Index c = 0;
    while (used[c]) ++c;  // terminates: deg < degree_bound colors available
    out.color[v] = c;
    out.num_colors = std::max(out.num_colors, c + 1);
    for (Index w : adj[v])
      if (out.color[w] >= 0) used[out.color[w]] = 0;
  }
  return out;
}

}  // namespace coarse
