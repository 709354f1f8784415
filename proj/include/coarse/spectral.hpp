#pragma once

#include "coarse/sparse_operator.hpp"

namespace coarse {

/// Largest singular value. Operators whose larger dimension is at most 512
/// go through a dense decomposition; larger ones use power iteration on
/// a* a with relative tolerance 1e-10 on the iterate.
double spectral_norm(const SparseOperator& a);

/// Multiplicativity of norms across a rank-one middle factor:
///   ||v|| * ||b v c|| == ||b v|| * ||v c||
/// for any operators b, c when rank(v) <= 1. Returns true when both sides
/// agree to 1e-9 relative. Throws if v has rank greater than one; the
/// message names two linearly independent columns.
bool rank_one_norm_identity_check(const SparseOperator& b, const SparseOperator& v,
                                  const SparseOperator& c);

}  // namespace coarse
