#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "coarse/group_table.hpp"
#include "coarse/relation.hpp"
#include "coarse/sparse_operator.hpp"

namespace coarse {

enum class FiltrationKind {
  metric,
  group,
  filter_restricted,
  explicit_kind,
  amplified,
  operator_induced,
};

/// Outcome of a membership or containment query against a filtration.
/// Contained verdicts carry the minimal level; refusals carry a witness
/// pair of the tested relation not covered at the level cap, or for
/// filter-restricted structures the computed splitting set whose base
/// coverage failed.
struct MembershipCertificate {
  bool contained = false;
  int level = -1;                                   // minimal k when contained
  std::optional<IndexPair> witness_pair;            // uncovered pair on refusal
  std::optional<std::vector<Index>> splitting_set;  // S(E) on the filter path
  std::optional<int> base_index;                    // matched base element
};

/// Intensional presentation of a coarse structure: a symmetric reflexive
/// generator, its composition powers as levels, and a level cap. level(0)
/// is the diagonal and level(k+1) = level(k) o generator, so levels grow
/// monotonically. Levels are computed lazily and cached; copies share the
/// cache. All member functions are safe to call concurrently.
class CoarseFiltration {
 public:
  static constexpr int kDefaultMaxLevel = 64;

  CoarseFiltration(Relation generator, FiltrationKind kind,
                   int max_level = kDefaultMaxLevel,
                   std::optional<std::vector<std::vector<Index>>> filter_base = {});

  const GroundSet& domain() const { return generator_.domain(); }
  /// Symmetrized, reflexive form of the generator handed to the constructor.
  const Relation& generator() const { return generator_; }
  FiltrationKind kind() const { return kind_; }
  int max_level() const { return max_level_; }
  const std::optional<std::vector<std::vector<Index>>>& filter_base() const {
    return base_;
  }

  Relation level(int k) const;

  /// Minimal k <= max_level with e contained in level(k), or a refusal
  /// carrying a pair of e outside the deepest level reached.
  MembershipCertificate membership_level(const Relation& e) const;

  /// Filter-restricted containment: e must lie in some level and its
  /// splitting set must contain a base element. Only valid on
  /// filter_restricted filtrations.
  MembershipCertificate filter_membership(const Relation& e) const;

  /// Snapshot of levels computed so far, for cache persistence.
  std::vector<Relation> cached_levels() const;
  /// Seed the cache with externally stored levels. Levels must agree with
  /// what recomputation would produce; each is checked to extend its
  /// predecessor and to contain the diagonal, and a mismatched level(0)
  /// or non-monotone chain is rejected.
  void preload_levels(const std::vector<Relation>& levels);

 private:
  struct LevelCache {
    std::mutex mutex;
    std::vector<Relation> levels;
    int fixpoint = -1;  // smallest k with level(k) == level(k-1), -1 if not seen
  };

  Relation generator_;
  FiltrationKind kind_;
  int max_level_;
  std::optional<std::vector<std::vector<Index>>> base_;
  std::shared_ptr<LevelCache> cache_;
};

inline Relation level(const CoarseFiltration& f, int k) { return f.level(k); }
inline MembershipCertificate membership_level(const Relation& e,
                                              const CoarseFiltration& f) {
  return f.membership_level(e);
}
inline MembershipCertificate filter_membership(const Relation& e,
                                               const CoarseFiltration& f) {
  return f.filter_membership(e);
}

CoarseFiltration metric_filtration(Relation generator,
                                   int max_level = CoarseFiltration::kDefaultMaxLevel);
CoarseFiltration explicit_filtration(Relation generator,
                                     int max_level = CoarseFiltration::kDefaultMaxLevel);
CoarseFiltration group_filtration(const GroupTable& group, const std::vector<Index>& s,
                                  int max_level = CoarseFiltration::kDefaultMaxLevel);
/// Metric structure cut down to entourages whose splitting set contains a
/// base element. The base must be directed: every pairwise intersection
/// must contain some base element.
CoarseFiltration filter_filtration(Relation metric_generator,
                                   std::vector<std::vector<Index>> base,
                                   int max_level = CoarseFiltration::kDefaultMaxLevel);

/// Product space Y x {1..n} with index (y,t) -> y*n + t. The generator is
/// the preimage of the source generator under the projection, so every
/// fiber is uniformly bounded and section bounds scale by n.
CoarseFiltration amplify(const CoarseFiltration& f, Index n);

/// Structure generated by a finite family of operators on a common ground
/// set: the symmetrized reflexive union of their supports at threshold eps.
CoarseFiltration structure_from_operators(const GroundSet& domain,
                                          const std::vector<SparseOperator>& ops,
                                          double eps,
                                          int max_level = CoarseFiltration::kDefaultMaxLevel);

}  // namespace coarse
