#include <cmath>
#include <stdexcept>

#include "coarse/relation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coarse;

TEST_CASE("relation basics") {
  GroundSet d(5);
  Relation e(d, {{0, 1}, {1, 2}, {0, 1}, {3, 0}});
  CHECK(e.size() == 3);  // duplicates collapse
  CHECK(e.contains({0, 1}));
  CHECK(!e.contains({1, 0}));
  CHECK(e.subset_of(Relation::full(d)));
  CHECK(Relation::diagonal(d).subset_of(Relation::band(d, 1)));
  CHECK(Relation::band(d, 4) == Relation::full(d));
  CHECK_THROWS_AS(Relation(d, {{0, 5}}), std::out_of_range);
  CHECK_THROWS_AS(Relation(d, {{-1, 0}}), std::out_of_range);
}

TEST_CASE("compose and inverse against enumeration") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(12));
    const Relation a = oracle::random_relation(rng, n, 30);
    const Relation b = oracle::random_relation(rng, n, 30);
    CHECK(a.compose(b) == oracle::compose_oracle(a, b));
    CHECK(a.inverse() == oracle::inverse_oracle(a));
    CHECK(a.inverse().inverse() == a);
    const auto lib = a.section_bounds();
    const auto ref = oracle::section_bounds_oracle(a);
    CHECK(lib.max_row == ref.max_row);
    CHECK(lib.max_col == ref.max_col);
  }
}

TEST_CASE("composition distributes over union and respects the diagonal") {
  Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(10));
    const GroundSet d(n);
    const Relation a = oracle::random_relation(rng, n, 20);
    const Relation b = oracle::random_relation(rng, n, 20);
    const Relation c = oracle::random_relation(rng, n, 20);
    CHECK(a.compose(Relation::diagonal(d)) == a);
    CHECK(Relation::diagonal(d).compose(a) == a);
    CHECK(a.compose(b.union_with(c)) ==
          a.compose(b).union_with(a.compose(c)));
    // (a o b)^{-1} = b^{-1} o a^{-1}
    CHECK(a.compose(b).inverse() == b.inverse().compose(a.inverse()));
  }
}

TEST_CASE("symmetrized reflexive closure") {
  GroundSet d(4);
  Relation e(d, {{0, 2}, {3, 1}});
  const Relation s = e.symmetrized_reflexive();
  CHECK(s.symmetric());
  CHECK(s.reflexive());
  CHECK(e.subset_of(s));
  CHECK(e.inverse().subset_of(s));
  CHECK(s.size() == 4 + 4);
  CHECK(s.symmetrized_reflexive() == s);
}

TEST_CASE("metric entourage from a distance table") {
  const std::vector<std::vector<double>> table = {
      {0, 1, 5}, {1, 0, 3}, {5, 3, 0}};
  const Relation r1 = metric_entourage(table, 1.0);
  CHECK(r1.contains({0, 1}));
  CHECK(r1.contains({1, 0}));
  CHECK(!r1.contains({1, 2}));
  CHECK(r1.reflexive());
  const Relation r3 = metric_entourage(table, 3.0);
  CHECK(r3.contains({1, 2}));
  CHECK(!r3.contains({0, 2}));
  CHECK(metric_entourage(table, 5.0) == Relation::full(GroundSet(3)));

  const std::vector<std::vector<double>> ragged = {{0.0, 1.0}};
  const std::vector<std::vector<double>> nonzero_diag = {{1.0}};
  const std::vector<std::vector<double>> asymmetric = {{0.0, 1.0}, {2.0, 0.0}};
  const std::vector<std::vector<double>> negative = {{0.0, -1.0}, {-1.0, 0.0}};
  CHECK_THROWS_AS(metric_entourage(ragged, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(metric_entourage(nonzero_diag, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(metric_entourage(asymmetric, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(metric_entourage(negative, 1.0), std::invalid_argument);
}

TEST_CASE("metric entourage on integer points is exact at the boundary") {
  // Unit square plus a far point; radius sqrt(2) must include the diagonal.
  const std::vector<std::vector<long long>> pts = {
      {0, 0}, {1, 0}, {0, 1}, {1, 1}, {10, 10}};
  const Relation r = metric_entourage(pts, std::sqrt(2.0));
  CHECK(r.contains({0, 3}));  // distance exactly sqrt(2)
  CHECK(r.contains({0, 1}));
  CHECK(!r.contains({0, 4}));
  const Relation r1 = metric_entourage(pts, 1.0);
  CHECK(!r1.contains({0, 3}));
  CHECK(r1.contains({0, 2}));
}

TEST_CASE("interval band equals the interval metric entourage") {
  std::vector<std::vector<long long>> line;
  for (long long i = 0; i < 9; ++i) line.push_back({i});
  for (Index r = 0; r < 4; ++r)
    CHECK(Relation::band(GroundSet(9), r) == metric_entourage(line, r));
}

TEST_CASE("splitting points against the straddle scan") {
  Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(20));
    const Relation e = oracle::random_relation(rng, n, 40);
    CHECK(splitting_points(e) == oracle::splitting_oracle(e));
  }
}

TEST_CASE("splitting points of the 17-point block relation") {
  const Relation e = oracle::block_relation_17();
  const std::vector<Index> expected = {0, 3, 4, 5, 8, 9, 12, 13, 14};
  CHECK(splitting_points(e) == expected);
  CHECK(splitting_points(e) == oracle::splitting_oracle(e));
}

TEST_CASE("splitting point algebra") {
  Rng rng(104);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(16));
    const Relation e = oracle::random_relation(rng, n, 30);
    const Relation f = oracle::random_relation(rng, n, 30);

    CHECK(splitting_points(e) == splitting_points(e.inverse()));

    const auto se = splitting_points(e);
    const auto sf = splitting_points(f);
    std::vector<Index> both;
    std::set_intersection(se.begin(), se.end(), sf.begin(), sf.end(),
                          std::back_inserter(both));
    const auto s_union = splitting_points(e.union_with(f));
    const auto s_comp = splitting_points(e.compose(f));
    CHECK(std::includes(s_union.begin(), s_union.end(), both.begin(), both.end()));
    CHECK(std::includes(s_comp.begin(), s_comp.end(), both.begin(), both.end()));

    // Larger relations split less.
    const auto s_bigger = splitting_points(e.union_with(f));
    const auto s_e = splitting_points(e);
    CHECK(std::includes(s_e.begin(), s_e.end(), s_bigger.begin(), s_bigger.end()));
  }
}

TEST_CASE("gap relation splits exactly at the gaps") {
  // E_B = {(i-1, i) : i not in B}: its splitting set is B together with 0.
  Rng rng(105);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.below(20));
    std::set<Index> b;
    const std::size_t picks = rng.below(static_cast<std::uint64_t>(n));
    for (std::size_t i = 0; i < picks; ++i)
      b.insert(1 + static_cast<Index>(rng.below(n - 1)));
    std::vector<IndexPair> pairs;
    for (Index i = 1; i < n; ++i)
      if (!b.count(i)) pairs.emplace_back(i - 1, i);
    const Relation e(GroundSet(n), std::move(pairs));
    std::set<Index> expected = b;
    expected.insert(0);
    CHECK(splitting_points(e) ==
          std::vector<Index>(expected.begin(), expected.end()));
  }
}

TEST_CASE("diagonal splits everywhere, full relation nowhere but zero") {
  const GroundSet d(6);
  const auto all = splitting_points(Relation::diagonal(d));
  CHECK(all.size() == 6);
  const auto none = splitting_points(Relation::full(d));
  CHECK(none == std::vector<Index>{0});
}
