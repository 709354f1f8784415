#include "coarse/sparse_operator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "coarse/group_table.hpp"

namespace coarse {

SparseOperator::SparseOperator(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0)
    throw std::invalid_argument("SparseOperator: negative dimension");
}

SparseOperator::SparseOperator(
    Index rows, Index cols,
    const std::vector<std::tuple<Index, Index, Complex>>& entries)
    : SparseOperator(rows, cols) {
  for (const auto& [y, x, v] : entries) {
    if (y < 0 || y >= rows_ || x < 0 || x >= cols_)
      throw std::out_of_range("SparseOperator: entry (" + std::to_string(y) + "," +
                              std::to_string(x) + ") outside " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
    if (entries_.count({y, x}))
      throw std::invalid_argument("SparseOperator: duplicate entry position");
    set(y, x, v);
  }
}

void SparseOperator::set(Index y, Index x, Complex v) {
  if (v == Complex{0.0, 0.0}) return;
  entries_[{y, x}] = v;
}

SparseOperator SparseOperator::identity(Index n) {
  SparseOperator out(n, n);
  for (Index i = 0; i < n; ++i) out.set(i, i, 1.0);
  return out;
}

SparseOperator SparseOperator::basis_shift(Index n, Index from, Index to) {
  SparseOperator out(n, n);
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw std::out_of_range("SparseOperator::basis_shift: index outside ground set");
  out.set(to, from, 1.0);
  return out;
}

SparseOperator SparseOperator::diagonal(const std::vector<Complex>& values) {
  const Index n = static_cast<Index>(values.size());
  SparseOperator out(n, n);
  for (Index i = 0; i < n; ++i) out.set(i, i, values[i]);
  return out;
}

SparseOperator SparseOperator::indicator(Index n, const std::vector<Index>& subset) {
  SparseOperator out(n, n);
  for (Index i : subset) {
    if (i < 0 || i >= n)
      throw std::out_of_range("SparseOperator::indicator: index outside ground set");
    out.set(i, i, 1.0);
  }
  return out;
}

SparseOperator SparseOperator::from_dense(const Eigen::MatrixXcd& m, double drop_tol) {
  SparseOperator out(static_cast<Index>(m.rows()), static_cast<Index>(m.cols()));
  for (Index y = 0; y < out.rows_; ++y)
    for (Index x = 0; x < out.cols_; ++x)
      if (std::abs(m(y, x)) > drop_tol) out.set(y, x, m(y, x));
  return out;
}

Complex SparseOperator::entry(Index y, Index x) const {
  const auto it = entries_.find({y, x});
  return it == entries_.end() ? Complex{0.0, 0.0} : it->second;
}

SparseOperator SparseOperator::adjoint() const {
  SparseOperator out(cols_, rows_);
  for (const auto& [pos, v] : entries_) out.set(pos.second, pos.first, std::conj(v));
  return out;
}

SparseOperator SparseOperator::operator*(const SparseOperator& other) const {
  if (cols_ != other.rows_)
    throw std::invalid_argument("SparseOperator: shape mismatch in product");
  // Group the right factor by row, then accumulate row-by-row products.
  std::vector<std::vector<std::pair<Index, Complex>>> right_rows(other.rows_);
  for (const auto& [pos, v] : other.entries_)
    right_rows[pos.first].emplace_back(pos.second, v);
  std::map<IndexPair, Complex> acc;
  for (const auto& [pos, v] : entries_) {
    const auto& [y, k] = pos;
    for (const auto& [x, w] : right_rows[k]) acc[{y, x}] += v * w;
  }
  SparseOperator out(rows_, other.cols_);
  for (const auto& [pos, v] : acc) out.set(pos.first, pos.second, v);
  return out;
}

SparseOperator SparseOperator::operator+(const SparseOperator& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("SparseOperator: shape mismatch in sum");
  SparseOperator out(rows_, cols_);
  auto acc = entries_;
  for (const auto& [pos, v] : other.entries_) acc[pos] += v;
  for (const auto& [pos, v] : acc) out.set(pos.first, pos.second, v);
  return out;
}

SparseOperator SparseOperator::operator-(const SparseOperator& other) const {
  return *this + other.scaled(-1.0);
}

SparseOperator SparseOperator::scaled(Complex factor) const {
  SparseOperator out(rows_, cols_);
  for (const auto& [pos, v] : entries_) out.set(pos.first, pos.second, factor * v);
  return out;
}

std::vector<Complex> SparseOperator::apply(const std::vector<Complex>& v) const {
  if (static_cast<Index>(v.size()) != cols_)
    throw std::invalid_argument("SparseOperator::apply: vector length mismatch");
  std::vector<Complex> out(rows_, Complex{0.0, 0.0});
  for (const auto& [pos, w] : entries_) out[pos.first] += w * v[pos.second];
  return out;
}

std::vector<Complex> SparseOperator::apply_adjoint(const std::vector<Complex>& v) const {
  if (static_cast<Index>(v.size()) != rows_)
    throw std::invalid_argument("SparseOperator::apply_adjoint: vector length mismatch");
  std::vector<Complex> out(cols_, Complex{0.0, 0.0});
  for (const auto& [pos, w] : entries_) out[pos.second] += std::conj(w) * v[pos.first];
  return out;
}

SparseOperator SparseOperator::diagonal_part() const {
  if (!square())
    throw std::invalid_argument("SparseOperator::diagonal_part: operator not square");
  SparseOperator out(rows_, cols_);
  for (const auto& [pos, v] : entries_)
    if (pos.first == pos.second) out.set(pos.first, pos.second, v);
  return out;
}

double SparseOperator::max_entry_magnitude() const {
  double m = 0.0;
  for (const auto& [pos, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows_, cols_);
  for (const auto& [pos, v] : entries_) m(pos.first, pos.second) = v;
  return m;
}

Relation support(const SparseOperator& a, double eps) {
  if (!a.square())
    throw std::invalid_argument("support: operator not square");
  if (eps < 0) throw std::invalid_argument("support: negative threshold");
  std::vector<IndexPair> pairs;
  for (const auto& [pos, v] : a.entries())
    if (std::abs(v) > eps) pairs.emplace_back(pos.second, pos.first);
  return Relation(GroundSet(a.rows()), std::move(pairs));
}

SparseOperator partial_translation(const Relation& e) {
  SparseOperator out(e.domain().size(), e.domain().size());
  std::vector<std::tuple<Index, Index, Complex>> entries;
  for (const auto& [x, xp] : e.pairs()) entries.emplace_back(xp, x, Complex{1.0, 0.0});
  return SparseOperator(e.domain().size(), e.domain().size(), entries);
}

SparseOperator left_translation(const GroupTable& group, Index g) {
  const Index n = group.order();
  if (g < 0 || g >= n)
    throw std::out_of_range("left_translation: element outside group");
  SparseOperator out(n, n);
  std::vector<std::tuple<Index, Index, Complex>> entries;
  for (Index h = 0; h < n; ++h) entries.emplace_back(group.mul(g, h), h, Complex{1.0, 0.0});
  return SparseOperator(n, n, entries);
}

}  // namespace coarse
