#pragma once

#include <vector>

#include "coarse/sparse_operator.hpp"

namespace coarse {

/// Decay profile of an operator along an exhaustion A_0 <= A_1 <= ... of
/// the ground set: eps[m] is the largest entry magnitude outside
/// A_m x A_m. The sequence is nonincreasing, and the final value is zero
/// exactly when the last set covers all support rows and columns.
struct GhostProfile {
  std::vector<std::vector<Index>> exhaustion;
  std::vector<double> eps;
};

GhostProfile ghost_profile(const SparseOperator& a,
                           std::vector<std::vector<Index>> exhaustion);

}  // namespace coarse
