#include "coarse/isometry.hpp"

#include <stdexcept>
#include <string>

#include "coarse/spectral.hpp"

namespace coarse {

double isometry_defect(const SparseOperator& u) {
  return spectral_norm(u.adjoint() * u - SparseOperator::identity(u.cols()));
}

IsometryData embed_from_map(const std::vector<Index>& f, const CoarseFiltration& source,
                            const CoarseFiltration& target) {
  const Index nx = source.domain().size();
  const Index ny = target.domain().size();
  if (static_cast<Index>(f.size()) != nx)
    throw std::invalid_argument("embed_from_map: map length differs from source size");
  std::vector<Index> seen(ny, -1);
  std::vector<std::tuple<Index, Index, Complex>> entries;
  for (Index x = 0; x < nx; ++x) {
    if (f[x] < 0 || f[x] >= ny)
      throw std::out_of_range("embed_from_map: image " + std::to_string(f[x]) +
                              " outside target of size " + std::to_string(ny));
    if (seen[f[x]] >= 0)
      throw std::invalid_argument("embed_from_map: map not injective, points " +
                                  std::to_string(seen[f[x]]) + " and " +
                                  std::to_string(x) + " collide");
    seen[f[x]] = x;
    entries.emplace_back(f[x], x, Complex{1.0, 0.0});
  }
  return IsometryData{SparseOperator(ny, nx, entries), source, target};
}

}  // namespace coarse
