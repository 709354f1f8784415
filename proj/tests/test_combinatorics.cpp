#include <numeric>
#include <set>
#include <stdexcept>

#include "coarse/coloring.hpp"
#include "coarse/matching.hpp"
#include "coarse/partial_bijection.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coarse;

namespace {

std::vector<std::vector<Index>> random_family(Rng& rng, std::size_t max_sets,
                                              Index universe) {
  const std::size_t count = 1 + rng.below(max_sets);
  std::vector<std::vector<Index>> family(count);
  for (auto& set : family) {
    std::set<Index> s;
    const std::size_t picks = rng.below(static_cast<std::uint64_t>(universe) + 1);
    for (std::size_t i = 0; i < picks; ++i)
      s.insert(static_cast<Index>(rng.below(universe)));
    set.assign(s.begin(), s.end());
  }
  return family;
}

}  // namespace

TEST_CASE("hall selector agrees with exhaustive SDR search") {
  Rng rng(401);
  int found = 0, refused = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto family = random_family(rng, 10, 10);
    const SelectorResult result = hall_selector(family);
    const auto reference = oracle::sdr_backtracking(family);
    CHECK(result.selector.has_value() == reference.has_value());
    CHECK(result.selector.has_value() != result.deficiency_witness.has_value());
    if (result.selector) {
      ++found;
      std::set<Index> used;
      for (std::size_t i = 0; i < family.size(); ++i) {
        const Index v = (*result.selector)[i];
        CHECK(std::binary_search(family[i].begin(), family[i].end(), v));
        CHECK(used.insert(v).second);  // pairwise distinct
      }
    } else {
      ++refused;
      // The witness indices really violate Hall's condition.
      std::set<Index> joint;
      for (Index i : *result.deficiency_witness) {
        REQUIRE(i < static_cast<Index>(family.size()));
        joint.insert(family[i].begin(), family[i].end());
      }
      CHECK(joint.size() < result.deficiency_witness->size());
    }
  }
  // The sampler must exercise both verdicts for the test to mean anything.
  CHECK(found > 20);
  CHECK(refused > 20);
}

TEST_CASE("hall selector degenerate families") {
  const auto both = hall_selector({{0}, {0}});
  REQUIRE(both.deficiency_witness.has_value());
  CHECK(both.deficiency_witness->size() == 2);
  const auto empty = hall_selector({});
  REQUIRE(empty.selector.has_value());
  CHECK(empty.selector->empty());
  const auto with_empty_set = hall_selector({{3}, {}});
  REQUIRE(with_empty_set.deficiency_witness.has_value());
}

TEST_CASE("maximum matching size matches augmenting-path count on small graphs") {
  Rng rng(402);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(7));
    std::vector<std::vector<Index>> adj(n);
    BipartiteMatcher matcher(n, n);
    for (Index l = 0; l < n; ++l)
      for (Index r = 0; r < n; ++r)
        if (rng.below(3) == 0) {
          adj[l].push_back(r);
          matcher.add_edge(l, r);
        }
    // Exhaustive maximum matching by trying all subsets of left vertices.
    Index best = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      std::vector<std::vector<Index>> sub;
      for (Index l = 0; l < n; ++l)
        if (mask & (1ull << l)) sub.push_back(adj[l]);
      if (oracle::sdr_backtracking(sub))
        best = std::max(best, static_cast<Index>(sub.size()));
    }
    CHECK(matcher.solve() == best);
  }
}

TEST_CASE("greedy coloring is proper and within the degree bound") {
  Rng rng(403);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(15));
    std::set<IndexPair> edge_set;
    for (std::size_t i = 0; i < 2 * static_cast<std::size_t>(n); ++i) {
      const Index a = static_cast<Index>(rng.below(n));
      const Index b = static_cast<Index>(rng.below(n));
      if (a != b) edge_set.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<IndexPair> edges(edge_set.begin(), edge_set.end());
    std::vector<Index> degree(n, 0);
    for (const auto& [a, b] : edges) {
      ++degree[a];
      ++degree[b];
    }
    const Index max_degree = *std::max_element(degree.begin(), degree.end());
    const Coloring coloring = greedy_coloring(n, edges, max_degree + 1);
    CHECK(coloring.num_colors <= max_degree + 1);
    for (const auto& [a, b] : edges) CHECK(coloring.color[a] != coloring.color[b]);
    // A tight bound is rejected when some vertex saturates it.
    if (max_degree > 0)
      CHECK_THROWS_AS(greedy_coloring(n, edges, max_degree), std::invalid_argument);
  }
  CHECK_THROWS_AS(greedy_coloring(3, {{0, 0}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(greedy_coloring(3, {{0, 5}}, 2), std::out_of_range);
}

TEST_CASE("partial bijection construction") {
  CHECK_NOTHROW(PartialBijection({{0, 1}, {1, 0}}));
  CHECK_THROWS_AS(PartialBijection({{0, 1}, {0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(PartialBijection({{1, 2}, {0, 2}}), std::invalid_argument);
}

TEST_CASE("decomposition into partial bijections") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(30));
    const Index cap = 1 + static_cast<Index>(rng.below(6));
    const Relation e = oracle::random_bounded_relation(rng, n, cap, 4 * n);
    const auto bounds = e.section_bounds();
    const Index max_section = std::max(bounds.max_row, bounds.max_col);

    for (auto strategy : {DecomposeStrategy::edge_coloring, DecomposeStrategy::greedy}) {
      const auto pieces = decompose_partial_bijections(e, strategy);
      std::set<IndexPair> seen;
      for (const auto& piece : pieces) {
        CHECK(oracle::is_partial_bijection_pairs(piece.pairs()));
        for (const auto& p : piece.pairs()) CHECK(seen.insert(p).second);
      }
      CHECK(seen.size() == e.size());
      for (const auto& p : e.pairs()) CHECK(seen.count(p));
      if (strategy == DecomposeStrategy::edge_coloring)
        CHECK(static_cast<Index>(pieces.size()) <= max_section);
      else
        CHECK(static_cast<Index>(pieces.size()) <=
              bounds.max_row + bounds.max_col - 1);
    }
  }
}

TEST_CASE("decomposition piece count is sharp on regular patterns") {
  // The full k x k block needs exactly k pieces.
  for (Index k : {1, 2, 3, 5}) {
    std::vector<IndexPair> pairs;
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < k; ++b) pairs.emplace_back(a, b);
    const auto pieces =
        decompose_partial_bijections(Relation(GroundSet(k), std::move(pairs)));
    CHECK(static_cast<Index>(pieces.size()) == k);
  }
  const auto none = decompose_partial_bijections(Relation::empty(GroundSet(4)));
  CHECK(none.empty());
}

TEST_CASE("claim partitions on singleton locators collapse to one piece") {
  // Permutation-like data: every locator is a singleton.
  LocatorSets loc;
  loc.y_of = {{2}, {0}, {1}};
  loc.x_of = {{1}, {2}, {0}};
  const ClaimPartition cp = claim_partitions(loc, loc, 0.5, 0.5);
  CHECK(cp.b_pieces.size() == 1);
  CHECK(cp.x_pieces.size() == 1);
  CHECK(cp.y_pieces.size() == 1);
  CHECK(oracle::verify_claim_partition(cp, loc, loc).empty());
}

TEST_CASE("claim partitions separate identical two-point locators") {
  LocatorSets loc;
  loc.y_of = {{0, 1}, {0, 1}};
  loc.x_of = {{0, 1}, {0, 1}};
  const ClaimPartition cp = claim_partitions(loc, loc, 0.5, 0.5);
  CHECK(cp.b_pieces.size() >= 2);
  const std::string verdict = oracle::verify_claim_partition(cp, loc, loc);
  INFO(verdict);
  CHECK(verdict.empty());
}

TEST_CASE("claim partitions pass the four-condition verifier on random data") {
  Rng rng(405);
  for (int trial = 0; trial < 60; ++trial) {
    const Index nx = 2 + static_cast<Index>(rng.below(12));
    const Index ny = 2 + static_cast<Index>(rng.below(12));
    const Index cap = 1 + static_cast<Index>(rng.below(4));
    // Symmetric random locator families at two nested thresholds.
    LocatorSets at_eta;
    at_eta.y_of.assign(nx, {});
    at_eta.x_of.assign(ny, {});
    LocatorSets at_delta;
    at_delta.y_of.assign(nx, {});
    at_delta.x_of.assign(ny, {});
    for (Index x = 0; x < nx; ++x) {
      std::set<Index> ys;
      const std::size_t picks = rng.below(cap + 1);
      for (std::size_t i = 0; i < picks; ++i)
        ys.insert(static_cast<Index>(rng.below(ny)));
      for (Index y : ys) {
        at_eta.y_of[x].push_back(y);
        at_eta.x_of[y].push_back(x);
        if (rng.below(2)) {  // delta families are sub-families
          at_delta.y_of[x].push_back(y);
          at_delta.x_of[y].push_back(x);
        }
      }
    }
    for (auto& v : at_eta.x_of) std::sort(v.begin(), v.end());
    for (auto& v : at_delta.x_of) std::sort(v.begin(), v.end());

    const ClaimPartition cp = claim_partitions(at_delta, at_eta, 0.5, 0.25);
    const std::string verdict = oracle::verify_claim_partition(cp, at_delta, at_eta);
    INFO(verdict);
    CHECK(verdict.empty());
  }
}

TEST_CASE("claim partitions validate their inputs") {
  LocatorSets ok;
  ok.y_of = {{0}};
  ok.x_of = {{0}};
  CHECK_THROWS_AS(claim_partitions(ok, ok, 0.25, 0.5), std::invalid_argument);
  LocatorSets broken;
  broken.y_of = {{0}};
  broken.x_of = {{}};  // violates symmetry
  CHECK_THROWS_AS(claim_partitions(broken, broken, 0.5, 0.5), std::invalid_argument);
  LocatorSets empty;
  empty.y_of = {{}, {}};
  empty.x_of = {{}};
  const ClaimPartition cp = claim_partitions(empty, empty, 0.5, 0.5);
  CHECK(cp.b_pieces.empty());
}

TEST_CASE("alternating reachability certifies deficiency") {
  BipartiteMatcher m(3, 2);
  m.add_edge(0, 0);
  m.add_edge(1, 0);
  m.add_edge(2, 1);
  CHECK(m.solve() == 2);
  const auto stuck = m.alternating_reachable_left();
  // {0,1} both point only at right vertex 0.
  std::set<Index> joint;
  for (Index l : stuck) joint.insert(l == 2 ? 1 : 0);
  CHECK(stuck.size() > joint.size());
}
