#pragma once

#include "coarse/filtration.hpp"
#include "coarse/sparse_operator.hpp"

namespace coarse {

/// Operator ell2(X) -> ell2(Y) between the spaces of two filtrations,
/// together with the tolerance at which it is accepted as an isometry.
/// The invariant ||u* u - 1|| <= tol is established by check_isometry and
/// enforced by the pipeline, not by construction, so that defective inputs
/// can be represented and reported.
struct IsometryData {
  SparseOperator u;
  CoarseFiltration source;  // on the columns X
  CoarseFiltration target;  // on the rows Y
  double tol = 1e-10;
};

double isometry_defect(const SparseOperator& u);

inline bool check_isometry(const SparseOperator& u, double tol = 1e-10) {
  return isometry_defect(u) <= tol;
}

/// The isometry delta_x -> delta_{f(x)} of an injective map f. Satisfies
/// u* u = 1 exactly, and conjugation by u lands in the corner of the image
/// projection.
IsometryData embed_from_map(const std::vector<Index>& f, const CoarseFiltration& source,
                            const CoarseFiltration& target);

}  // namespace coarse
