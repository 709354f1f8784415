#pragma once

#include <Eigen/Core>
#include <complex>
#include <map>
#include <vector>

#include "coarse/relation.hpp"

namespace coarse {

using Complex = std::complex<double>;

/// Sparse operator ell2(X) -> ell2(Y) with X = {0..cols-1}, Y = {0..rows-1}.
/// entry(y, x) is the matrix coefficient <a delta_x, delta_y>. Entries are
/// kept in a map ordered by (row, col), which fixes the serialization order;
/// exact zeros are never stored.
class SparseOperator {
 public:
  SparseOperator(Index rows, Index cols);
  /// Entries given as (row, col, value); duplicate positions are rejected.
  SparseOperator(Index rows, Index cols,
                 const std::vector<std::tuple<Index, Index, Complex>>& entries);

  static SparseOperator identity(Index n);
  /// Rank-one partial isometry sending delta_from to delta_to on an n-point
  /// set: the single entry (to, from) = 1.
  static SparseOperator basis_shift(Index n, Index from, Index to);
  static SparseOperator diagonal(const std::vector<Complex>& values);
  /// Diagonal indicator projection of a subset.
  static SparseOperator indicator(Index n, const std::vector<Index>& subset);
  static SparseOperator from_dense(const Eigen::MatrixXcd& m, double drop_tol = 0.0);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  std::size_t nnz() const { return entries_.size(); }
  Complex entry(Index y, Index x) const;
  const std::map<IndexPair, Complex>& entries() const { return entries_; }

  SparseOperator adjoint() const;
  SparseOperator operator*(const SparseOperator& other) const;
  SparseOperator operator+(const SparseOperator& other) const;
  SparseOperator operator-(const SparseOperator& other) const;
  SparseOperator scaled(Complex factor) const;

  std::vector<Complex> apply(const std::vector<Complex>& v) const;
  std::vector<Complex> apply_adjoint(const std::vector<Complex>& v) const;

  /// Diagonal restriction; the conditional expectation onto diagonal
  /// operators. Requires a square operator.
  SparseOperator diagonal_part() const;

  double max_entry_magnitude() const;
  Eigen::MatrixXcd to_dense() const;

  friend bool operator==(const SparseOperator& a, const SparseOperator& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  void set(Index y, Index x, Complex v);  // drops exact zeros
  Index rows_, cols_;
  std::map<IndexPair, Complex> entries_;
};

/// Support relation at threshold eps: pairs (x, y) with |entry(y,x)| > eps.
/// The pair order (input point, output point) matches the pairing
/// <a delta_x, delta_y>; for diagonal rank-one projections p_x, p_y the
/// entry test coincides with the norm test |p_y a p_x| > eps.
Relation support(const SparseOperator& a, double eps = 0.0);

/// Partial translation v_E = sum over (x,x') in E of the shift
/// delta_x -> delta_x'. Requires E to have section bounds <= 1 for v_E to
/// be a partial isometry, but is defined for any relation.
SparseOperator partial_translation(const Relation& e);

/// u_g delta_h = delta_{g h}; the left regular representation.
SparseOperator left_translation(const class GroupTable& group, Index g);

inline SparseOperator conditional_expectation(const SparseOperator& a) {
  return a.diagonal_part();
}

}  // namespace coarse
