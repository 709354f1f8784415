#include "coarse/relation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coarse {

namespace {

void canonicalize(std::vector<IndexPair>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

}  // namespace

Relation::Relation(GroundSet domain, std::vector<IndexPair> pairs)
    : domain_(std::move(domain)), pairs_(std::move(pairs)) {
  for (const auto& [a, b] : pairs_) {
    if (a < 0 || b < 0 || a >= domain_.size() || b >= domain_.size())
      throw std::out_of_range("Relation: pair (" + std::to_string(a) + "," +
                              std::to_string(b) + ") outside ground set of size " +
                              std::to_string(domain_.size()));
  }
  canonicalize(pairs_);
}

Relation Relation::empty(const GroundSet& domain) { return Relation(domain, {}); }

Relation Relation::diagonal(const GroundSet& domain) {
  std::vector<IndexPair> pairs;
  pairs.reserve(domain.size());
  for (Index i = 0; i < domain.size(); ++i) pairs.emplace_back(i, i);
  return Relation(domain, std::move(pairs));
}

Relation Relation::band(const GroundSet& domain, Index radius) {
  if (radius < 0) throw std::invalid_argument("Relation::band: negative radius");
  std::vector<IndexPair> pairs;
  for (Index i = 0; i < domain.size(); ++i) {
    const Index lo = std::max<Index>(0, i - radius);
    const Index hi = std::min<Index>(domain.size() - 1, i + radius);
    for (Index j = lo; j <= hi; ++j) pairs.emplace_back(i, j);
  }
  return Relation(domain, std::move(pairs));
}

Relation Relation::full(const GroundSet& domain) {
  std::vector<IndexPair> pairs;
  pairs.reserve(static_cast<std::size_t>(domain.size()) * domain.size());
  for (Index i = 0; i < domain.size(); ++i)
    for (Index j = 0; j < domain.size(); ++j) pairs.emplace_back(i, j);
  return Relation(domain, std::move(pairs));
}

bool Relation::contains(IndexPair p) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

bool Relation::subset_of(const Relation& other) const {
  if (!domain_.compatible_with(other.domain_))
    throw std::invalid_argument("Relation::subset_of: ground set mismatch");
  return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(),
                       pairs_.end());
}

Relation Relation::inverse() const {
  std::vector<IndexPair> pairs;
  pairs.reserve(pairs_.size());
  for (const auto& [a, b] : pairs_) pairs.emplace_back(b, a);
  return Relation(domain_, std::move(pairs));
}

Relation Relation::compose(const Relation& other) const {
  if (!domain_.compatible_with(other.domain_))
    throw std::invalid_argument("Relation::compose: ground set mismatch");
  const auto rows = other.row_lists();
  std::vector<IndexPair> pairs;
  for (const auto& [x, y] : pairs_)
    for (Index z : rows[y]) pairs.emplace_back(x, z);
  canonicalize(pairs);
  return Relation(domain_, std::move(pairs));
}

Relation Relation::union_with(const Relation& other) const {
  if (!domain_.compatible_with(other.domain_))
    throw std::invalid_argument("Relation::union_with: ground set mismatch");
  std::vector<IndexPair> pairs;
  pairs.reserve(pairs_.size() + other.pairs_.size());
  std::merge(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(),
             std::back_inserter(pairs));
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return Relation(domain_, std::move(pairs));
}

SectionBounds Relation::section_bounds() const {
  std::vector<Index> row(domain_.size(), 0), col(domain_.size(), 0);
  for (const auto& [a, b] : pairs_) {
    ++row[a];
    ++col[b];
  }
  SectionBounds out;
  for (Index i = 0; i < domain_.size(); ++i) {
    out.max_row = std::max(out.max_row, row[i]);
    out.max_col = std::max(out.max_col, col[i]);
  }
  return out;
}

bool Relation::symmetric() const {
  for (const auto& [a, b] : pairs_)
    if (!contains({b, a})) return false;
  return true;
}

bool Relation::reflexive() const {
  for (Index i = 0; i < domain_.size(); ++i)
    if (!contains({i, i})) return false;
  return true;
}

Relation Relation::symmetrized_reflexive() const {
  std::vector<IndexPair> pairs;
  pairs.reserve(2 * pairs_.size() + domain_.size());
  for (const auto& [a, b] : pairs_) {
    pairs.emplace_back(a, b);
    pairs.emplace_back(b, a);
  }
  for (Index i = 0; i < domain_.size(); ++i) pairs.emplace_back(i, i);
  canonicalize(pairs);
  return Relation(domain_, std::move(pairs));
}

std::vector<std::vector<Index>> Relation::row_lists() const {
  std::vector<std::vector<Index>> rows(domain_.size());
  for (const auto& [a, b] : pairs_) rows[a].push_back(b);
  return rows;  // sorted because pairs_ is sorted lexicographically
}

Relation metric_entourage(const std::vector<std::vector<double>>& distance_table,
                          double radius) {
  if (radius < 0) throw std::invalid_argument("metric_entourage: negative radius");
  const Index n = static_cast<Index>(distance_table.size());
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(distance_table[i].size()) != n)
      throw std::invalid_argument("metric_entourage: distance table not square");
    if (distance_table[i][i] != 0.0)
      throw std::invalid_argument("metric_entourage: nonzero diagonal at " +
                                  std::to_string(i));
    for (Index j = 0; j < n; ++j) {
      if (distance_table[i][j] < 0.0)
        throw std::invalid_argument("metric_entourage: negative distance");
      if (distance_table[i][j] != distance_table[j][i])
        throw std::invalid_argument("metric_entourage: asymmetric distance table");
    }
  }
  std::vector<IndexPair> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (distance_table[i][j] <= radius) pairs.emplace_back(i, j);
  return Relation(GroundSet(n), std::move(pairs));
}

Relation metric_entourage(const std::vector<std::vector<long long>>& points,
                          double radius) {
  if (radius < 0) throw std::invalid_argument("metric_entourage: negative radius");
  const Index n = static_cast<Index>(points.size());
  const std::size_t dim = n > 0 ? points[0].size() : 0;
  for (const auto& p : points)
    if (p.size() != dim)
      throw std::invalid_argument("metric_entourage: inconsistent point dimension");
  const double r2 = radius * radius;
  std::vector<IndexPair> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      long long sq = 0;
      for (std::size_t d = 0; d < dim; ++d) {
        const long long diff = points[i][d] - points[j][d];
        sq += diff * diff;
      }
      if (static_cast<double>(sq) <= r2) pairs.emplace_back(i, j);
    }
  return Relation(GroundSet(n), std::move(pairs));
}

std::vector<Index> splitting_points(const Relation& e) {
  const Index n = e.domain().size();
  // Pair (a,b) with a != b blocks every cut n with min < n <= max; mark the
  // blocked interval with a difference array.
  std::vector<Index> diff(n + 1, 0);
  for (const auto& [a, b] : e.pairs()) {
    if (a == b) continue;
    const Index lo = std::min(a, b), hi = std::max(a, b);
    if (lo + 1 <= hi) {
      ++diff[lo + 1];
      --diff[hi + 1];
    }
  }
  std::vector<Index> out;
  Index running = 0;
  for (Index k = 0; k < n; ++k) {
    running += diff[k];
    if (running == 0) out.push_back(k);
  }
  return out;
}

}  // namespace coarse
