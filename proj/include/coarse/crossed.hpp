#pragma once

#include <map>
#include <vector>

#include "coarse/group_table.hpp"
#include "coarse/sparse_operator.hpp"

namespace coarse {

/// Decomposition a = sum over g of a_g u_g with diagonal coefficients a_g
/// and the left translations u_g. Coefficients are stored only for the
/// elements where they are nonzero; all of them lie in the prescribed set.
struct CrossedDecomposition {
  std::vector<Index> allowed;               // the set S, sorted
  std::map<Index, SparseOperator> coefficients;
  SparseOperator reconstruction = SparseOperator(0, 0);
  double residual = 0;                      // ||a - reconstruction||
};

/// Requires every nonzero entry (row y, column x) of a to satisfy
/// y x^{-1} in S, i.e. the support lies in the group entourage of S read
/// against the translation directions; the offending entry is reported
/// otherwise. a_g is the diagonal of a u_g^*, the conditional expectation
/// of the twisted operator.
CrossedDecomposition crossed_decompose(const SparseOperator& a, const GroupTable& group,
                                       const std::vector<Index>& s);

}  // namespace coarse
