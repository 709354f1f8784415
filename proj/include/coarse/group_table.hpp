#pragma once

#include <vector>

#include "coarse/relation.hpp"

namespace coarse {

/// Finite group given by its multiplication table, table[g][h] = g*h.
/// Construction validates closure, identity, inverses and associativity.
class GroupTable {
 public:
  explicit GroupTable(std::vector<std::vector<Index>> table);

  static GroupTable cyclic(Index n);
  /// Dihedral group of order 2n. Elements 0..n-1 are the rotations r^k,
  /// elements n..2n-1 are the reflections r^k s, with s r s = r^{-1}.
  static GroupTable dihedral(Index n);

  Index order() const { return static_cast<Index>(table_.size()); }
  Index mul(Index g, Index h) const { return table_[g][h]; }
  Index inv(Index g) const { return inverse_[g]; }
  Index identity() const { return identity_; }
  const std::vector<std::vector<Index>>& table() const { return table_; }

 private:
  std::vector<std::vector<Index>> table_;
  std::vector<Index> inverse_;
  Index identity_ = 0;
};

/// E_S = {(g,h) : g h^{-1} in S}. Row and column sections both have exactly
/// |S| elements, so the section bounds equal |S|.
Relation group_entourage(const GroupTable& group, const std::vector<Index>& s);

/// Pointwise product set {s*t : s in S, t in T}, sorted and deduplicated.
std::vector<Index> product_set(const GroupTable& group, const std::vector<Index>& s,
                               const std::vector<Index>& t);

std::vector<Index> inverse_set(const GroupTable& group, const std::vector<Index>& s);

}  // namespace coarse
