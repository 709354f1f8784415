#pragma once

#include "coarse/claim_partition.hpp"
#include "coarse/filtration.hpp"
#include "coarse/isometry.hpp"

namespace coarse {

/// Locator sets of an isometry at threshold delta:
///   y in y_of[x]  iff  |u_{yx}| * ||u* delta_y|| > delta,
/// where the left side is the norm of the compressed conjugate
/// Phi(e_xx) e_yy Phi(1). The same scalar decides x in x_of[y], so the two
/// families are symmetric, and each set has fewer than 1/delta^2 members
/// when u is an isometry.
struct Locators : LocatorSets {
  double delta = 0;
};

Locators locator_sets(const IsometryData& iso, double delta);

struct TailViolation {
  Index point = -1;
  double tail = 0;
};

/// Mass concentration of columns and rows on their eta-locators: for every
/// x the l2 mass of column x outside y_of[x] must stay below eps, and
/// mirrored for rows. Violations are listed per point.
struct ConcentrationReport {
  double eta = 0;
  double eps = 0;
  bool pass = false;
  std::vector<TailViolation> column_violations;
  std::vector<TailViolation> row_violations;
};

ConcentrationReport concentration_check(const IsometryData& iso, double eta, double eps);

/// Membership level of A = union over x of y_of[x]^2 in the target
/// filtration; the entourage certificate that locator spread is bounded.
MembershipCertificate entourage_union_level(const Locators& loc,
                                            const CoarseFiltration& target);

}  // namespace coarse
