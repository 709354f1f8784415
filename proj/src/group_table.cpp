#include "coarse/group_table.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace coarse {

GroupTable::GroupTable(std::vector<std::vector<Index>> table)
    : table_(std::move(table)) {
  const Index n = order();
  if (n == 0) throw std::invalid_argument("GroupTable: empty table");
  for (Index g = 0; g < n; ++g) {
    if (static_cast<Index>(table_[g].size()) != n)
      throw std::invalid_argument("GroupTable: table not square");
    for (Index h = 0; h < n; ++h)
      if (table_[g][h] < 0 || table_[g][h] >= n)
        throw std::invalid_argument("GroupTable: entry out of range");
  }

  identity_ = -1;
  for (Index e = 0; e < n; ++e) {
    bool is_identity = true;
    for (Index h = 0; h < n; ++h)
      if (table_[e][h] != h || table_[h][e] != h) {
        is_identity = false;
        break;
      }
    if (is_identity) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw std::invalid_argument("GroupTable: no identity element");

  inverse_.assign(n, -1);
  for (Index g = 0; g < n; ++g) {
    for (Index h = 0; h < n; ++h)
      if (table_[g][h] == identity_ && table_[h][g] == identity_) {
        inverse_[g] = h;
        break;
      }
    if (inverse_[g] < 0)
      throw std::invalid_argument("GroupTable: element " + std::to_string(g) +
                                  " has no inverse");
  }

  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw std::invalid_argument("GroupTable: associativity fails at (" +
                                      std::to_string(a) + "," + std::to_string(b) +
                                      "," + std::to_string(c) + ")");
}

GroupTable GroupTable::cyclic(Index n) {
  if (n <= 0) throw std::invalid_argument("GroupTable::cyclic: order must be positive");
  std::vector<std::vector<Index>> table(n, std::vector<Index>(n));
  for (Index g = 0; g < n; ++g)
    for (Index h = 0; h < n; ++h) table[g][h] = (g + h) % n;
  return GroupTable(std::move(table));
}

GroupTable GroupTable::dihedral(Index n) {
  if (n <= 0) throw std::invalid_argument("GroupTable::dihedral: n must be positive");
  const Index order = 2 * n;
  // Element k < n is r^k, element n + k is r^k s.
  auto mul = [n](Index a, Index b) -> Index {
    const bool fa = a >= n, fb = b >= n;
    const Index ra = fa ? a - n : a, rb = fb ? b - n : b;
    // (r^ra s^fa)(r^rb s^fb): moving s past r^rb inverts the exponent.
    const Index rot = fa ? (ra - rb % n + 2 * n) % n : (ra + rb) % n;
    const bool flip = fa != fb;
    return flip ? n + rot : rot;
  };
  std::vector<std::vector<Index>> table(order, std::vector<Index>(order));
  for (Index a = 0; a < order; ++a)
    for (Index b = 0; b < order; ++b) table[a][b] = mul(a, b);
  return GroupTable(std::move(table));
}

Relation group_entourage(const GroupTable& group, const std::vector<Index>& s) {
  const Index n = group.order();
  for (Index x : s)
    if (x < 0 || x >= n)
      throw std::out_of_range("group_entourage: set element " + std::to_string(x) +
                              " outside group of order " + std::to_string(n));
  std::vector<bool> in_s(n, false);
  for (Index x : s) in_s[x] = true;
  std::vector<IndexPair> pairs;
  for (Index g = 0; g < n; ++g)
    for (Index h = 0; h < n; ++h)
      if (in_s[group.mul(g, group.inv(h))]) pairs.emplace_back(g, h);
  return Relation(GroundSet(n), std::move(pairs));
}

std::vector<Index> product_set(const GroupTable& group, const std::vector<Index>& s,
                               const std::vector<Index>& t) {
  std::vector<Index> out;
  for (Index a : s)
    for (Index b : t) out.push_back(group.mul(a, b));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Index> inverse_set(const GroupTable& group, const std::vector<Index>& s) {
  std::vector<Index> out;
  out.reserve(s.size());
  for (Index a : s) out.push_back(group.inv(a));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace coarse
