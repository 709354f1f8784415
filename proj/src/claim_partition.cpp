#include "coarse/claim_partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "coarse/coloring.hpp"
#include "coarse/partial_bijection.hpp"
#include "coarse/relation.hpp"

namespace coarse {

namespace {

void check_symmetric(const LocatorSets& loc, const char* label) {
  const Index nx = static_cast<Index>(loc.y_of.size());
  const Index ny = static_cast<Index>(loc.x_of.size());
  for (Index x = 0; x < nx; ++x)
    for (Index y : loc.y_of[x]) {
      if (y < 0 || y >= ny)
        throw std::out_of_range(std::string("claim_partitions: ") + label +
                                " locator out of range");
      if (!std::binary_search(loc.x_of[y].begin(), loc.x_of[y].end(), x))
        throw std::invalid_argument(std::string("claim_partitions: ") + label +
                                    " locators not symmetric at (" +
                                    std::to_string(x) + "," + std::to_string(y) + ")");
    }
  for (Index y = 0; y < ny; ++y)
    for (Index x : loc.x_of[y])
      if (!std::binary_search(loc.y_of[x].begin(), loc.y_of[x].end(), y))
        throw std::invalid_argument(std::string("claim_partitions: ") + label +
                                    " locators not symmetric at (" +
                                    std::to_string(x) + "," + std::to_string(y) + ")");
}

Index family_bound(const LocatorSets& loc) {
  std::size_t n = 0;
  for (const auto& s : loc.y_of) n = std::max(n, s.size());
  for (const auto& s : loc.x_of) n = std::max(n, s.size());
  return static_cast<Index>(n);
}

/// Partition {0..count-1} by overlap of the given sets: vertices whose sets
/// intersect must land in different pieces. Degree is below bound_sq
/// because a set of size <= n meets at most n * n - 1 other sets under the
/// symmetry assumption.
std::vector<std::vector<Index>> overlap_partition(
    const std::vector<std::vector<Index>>& sets,
    const std::vector<std::vector<Index>>& mirror, Index degree_bound) {
  const Index count = static_cast<Index>(sets.size());
  std::vector<IndexPair> edges;
  for (Index v = 0; v < count; ++v) {
    std::vector<Index> neighbors;
    for (Index e : sets[v])
      for (Index w : mirror[e])
        if (w != v) neighbors.push_back(w);
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
    for (Index w : neighbors)
      if (v < w) edges.emplace_back(v, w);
  }
  const Coloring coloring = greedy_coloring(count, edges, degree_bound);
  std::vector<std::vector<Index>> pieces(coloring.num_colors);
  for (Index v = 0; v < count; ++v) pieces[coloring.color[v]].push_back(v);
  return pieces;
}

}  // namespace

ClaimPartition claim_partitions(const LocatorSets& at_delta, const LocatorSets& at_eta,
                                double delta, double eta) {
  if (!(eta > 0) || !(eta <= delta))
    throw std::invalid_argument("claim_partitions: need 0 < eta <= delta");
  if (at_delta.y_of.size() != at_eta.y_of.size() ||
      at_delta.x_of.size() != at_eta.x_of.size())
    throw std::invalid_argument("claim_partitions: family sizes disagree");
  check_symmetric(at_delta, "delta");
  check_symmetric(at_eta, "eta");

  ClaimPartition out;
  out.delta = delta;
  out.eta = eta;
  const Index n = std::max(family_bound(at_delta), family_bound(at_eta));
  out.bound_n = n;
  const Index nx = static_cast<Index>(at_delta.y_of.size());
  const Index ny = static_cast<Index>(at_delta.x_of.size());

  // A = union over x of y_of[x]^2, the pair set the b_pieces partition.
  std::vector<IndexPair> a_pairs;
  for (Index x = 0; x < nx; ++x)
    for (Index y : at_delta.y_of[x])
      for (Index yp : at_delta.y_of[x]) a_pairs.emplace_back(y, yp);
  std::sort(a_pairs.begin(), a_pairs.end());
  a_pairs.erase(std::unique(a_pairs.begin(), a_pairs.end()), a_pairs.end());

  if (!a_pairs.empty()) {
    // Singleton sections: rows and columns of A have at most n^2 entries,
    // so the edge-coloring decomposition needs at most n^2 pieces.
    const Relation a_rel(GroundSet(ny), a_pairs);
    const auto section_pieces = decompose_partial_bijections(a_rel);
    out.section_colors = static_cast<Index>(section_pieces.size());
    std::map<IndexPair, Index> section_color;
    for (Index c = 0; c < out.section_colors; ++c)
      for (const auto& p : section_pieces[c].pairs()) section_color[p] = c;

    // Per-x traces: pairs lying in a common y_of[x]^2 conflict; each pair
    // lies in at most n such squares of at most n^2 pairs, so degrees stay
    // below n^3.
    std::map<IndexPair, Index> pair_index;
    for (std::size_t i = 0; i < a_pairs.size(); ++i)
      pair_index[a_pairs[i]] = static_cast<Index>(i);
    std::vector<IndexPair> trace_edges;
    for (Index x = 0; x < nx; ++x) {
      const auto& ys = at_delta.y_of[x];
      std::vector<Index> members;
      for (Index y : ys)
        for (Index yp : ys) members.push_back(pair_index.at({y, yp}));
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
          trace_edges.emplace_back(std::min(members[i], members[j]),
                                   std::max(members[i], members[j]));
    }
    std::sort(trace_edges.begin(), trace_edges.end());
    trace_edges.erase(std::unique(trace_edges.begin(), trace_edges.end()),
                      trace_edges.end());
    const Coloring trace = greedy_coloring(static_cast<Index>(a_pairs.size()),
                                           trace_edges, n * n * n + 1);
    out.trace_colors = trace.num_colors;

    // Joint refinement keyed by both colors.
    std::map<IndexPair, std::vector<IndexPair>> refined;
    for (const auto& [pair, idx] : pair_index)
      refined[{section_color.at(pair), trace.color[idx]}].push_back(pair);
    for (auto& [key, piece] : refined) {
      std::sort(piece.begin(), piece.end());
      out.b_pieces.push_back(std::move(piece));
    }
  }

  if (nx > 0)
    out.x_pieces = overlap_partition(at_eta.y_of, at_eta.x_of, n * n + 1);
  if (ny > 0)
    out.y_pieces = overlap_partition(at_eta.x_of, at_eta.y_of, n * n + 1);
  return out;
}

}  // namespace coarse
