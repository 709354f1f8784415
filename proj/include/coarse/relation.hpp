#pragma once

#include <vector>

#include "coarse/ground_set.hpp"

namespace coarse {

struct SectionBounds {
  Index max_row = 0;  // sup over x of |{y : (x,y) in E}|
  Index max_col = 0;  // sup over y of |{x : (x,y) in E}|
};

/// Binary relation on a finite ground set, stored as a sorted, deduplicated
/// pair list. Pairs are ordered lexicographically, which is also the
/// serialization order, so equal relations have equal representations.
class Relation {
 public:
  Relation(GroundSet domain, std::vector<IndexPair> pairs);

  static Relation empty(const GroundSet& domain);
  static Relation diagonal(const GroundSet& domain);
  /// Pairs (i,j) with |i-j| <= radius; the entourage of the integer interval
  /// metric at the given radius.
  static Relation band(const GroundSet& domain, Index radius);
  static Relation full(const GroundSet& domain);

  const GroundSet& domain() const { return domain_; }
  // Ref-qualified so a temporary cannot leak a dangling reference.
  const std::vector<IndexPair>& pairs() const& { return pairs_; }
  const std::vector<IndexPair>& pairs() const&& = delete;
  std::size_t size() const { return pairs_.size(); }
  bool contains(IndexPair p) const;
  bool subset_of(const Relation& other) const;

  Relation inverse() const;
  /// this o other = {(x,z) : exists y with (x,y) in this and (y,z) in other}.
  Relation compose(const Relation& other) const;
  Relation union_with(const Relation& other) const;

  SectionBounds section_bounds() const;
  bool symmetric() const;
  bool reflexive() const;
  /// E u E^{-1} u diagonal.
  Relation symmetrized_reflexive() const;

  /// Rows indexed by first coordinate; each row sorted.
  std::vector<std::vector<Index>> row_lists() const;

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.domain_.size() == b.domain_.size() && a.pairs_ == b.pairs_;
  }

 private:
  GroundSet domain_;
  std::vector<IndexPair> pairs_;
};

inline Relation compose(const Relation& e, const Relation& f) { return e.compose(f); }
inline Relation inverse(const Relation& e) { return e.inverse(); }
inline SectionBounds section_bounds(const Relation& e) { return e.section_bounds(); }

/// Entourage {(x,y) : d(x,y) <= radius} of an explicit distance table.
/// The table must be square and symmetric with zero diagonal and no
/// negative entries.
Relation metric_entourage(const std::vector<std::vector<double>>& distance_table,
                          double radius);

/// Entourage of the Euclidean metric on a list of integer points. The
/// comparison d(x,y) <= radius is evaluated as an exact integer squared
/// distance against radius^2.
Relation metric_entourage(const std::vector<std::vector<long long>>& points,
                          double radius);

/// Splitting points: n is in S(E) when no pair of E straddles the cut at n,
/// in either orientation; that is, no (i,j) or (j,i) in E with i < n <= j.
/// 0 is always a splitting point.
std::vector<Index> splitting_points(const Relation& e);

}  // namespace coarse
