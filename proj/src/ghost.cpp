#include "coarse/ghost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coarse {

GhostProfile ghost_profile(const SparseOperator& a,
                           std::vector<std::vector<Index>> exhaustion) {
  if (!a.square()) throw std::invalid_argument("ghost_profile: operator not square");
  const Index n = a.rows();
  for (auto& set : exhaustion) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (Index i : set)
      if (i < 0 || i >= n)
        throw std::out_of_range("ghost_profile: exhaustion index outside ground set");
  }
  for (std::size_t m = 1; m < exhaustion.size(); ++m)
    if (!std::includes(exhaustion[m].begin(), exhaustion[m].end(),
                       exhaustion[m - 1].begin(), exhaustion[m - 1].end()))
      throw std::invalid_argument("ghost_profile: exhaustion not increasing at step " +
                                  std::to_string(m));

  GhostProfile out;
  out.eps.reserve(exhaustion.size());
  for (const auto& set : exhaustion) {
    double eps = 0.0;
    for (const auto& [pos, v] : a.entries()) {
      const bool inside =
          std::binary_search(set.begin(), set.end(), pos.second) &&
          std::binary_search(set.begin(), set.end(), pos.first);
      if (!inside) eps = std::max(eps, std::abs(v));
    }
    out.eps.push_back(eps);
  }
  out.exhaustion = std::move(exhaustion);
  return out;
}

}  // namespace coarse
