#include "coarse/crossed.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "coarse/spectral.hpp"

namespace coarse {

CrossedDecomposition crossed_decompose(const SparseOperator& a, const GroupTable& group,
                                       const std::vector<Index>& s) {
  const Index n = group.order();
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("crossed_decompose: operator size differs from group order");
  std::vector<Index> allowed = s;
  std::sort(allowed.begin(), allowed.end());
  allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
  for (Index g : allowed)
    if (g < 0 || g >= n)
      throw std::out_of_range("crossed_decompose: set element outside group");

  for (const auto& [pos, v] : a.entries()) {
    const Index g = group.mul(pos.first, group.inv(pos.second));
    if (!std::binary_search(allowed.begin(), allowed.end(), g))
      throw std::invalid_argument("crossed_decompose: entry (" +
                                  std::to_string(pos.first) + "," +
                                  std::to_string(pos.second) +
                                  ") lies outside the entourage of the set");
  }

  CrossedDecomposition out;
  out.allowed = allowed;
  out.reconstruction = SparseOperator(n, n);
  SparseOperator rec(n, n);
  for (Index g : allowed) {
    const SparseOperator ug = left_translation(group, g);
    const SparseOperator ag = (a * ug.adjoint()).diagonal_part();
    if (ag.nnz() == 0) continue;
    rec = rec + ag * ug;
    out.coefficients.emplace(g, ag);
  }
  out.residual = spectral_norm(a - rec);
  out.reconstruction = std::move(rec);
  return out;
}

}  // namespace coarse
