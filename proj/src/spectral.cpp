#include "coarse/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace coarse {

namespace {

constexpr Index kDenseLimit = 512;
constexpr double kPowerRelTol = 1e-10;
constexpr int kPowerMaxRounds = 100000;

/// Dense matrix of the nonzero rows and columns only; dropping zero rows
/// and columns changes neither singular values nor the norm.
Eigen::MatrixXcd compact_dense(const SparseOperator& a) {
  std::vector<Index> rows, cols;
  {
    std::vector<bool> rseen(a.rows(), false), cseen(a.cols(), false);
    for (const auto& [pos, v] : a.entries()) {
      rseen[pos.first] = true;
      cseen[pos.second] = true;
    }
    for (Index i = 0; i < a.rows(); ++i)
      if (rseen[i]) rows.push_back(i);
    for (Index j = 0; j < a.cols(); ++j)
      if (cseen[j]) cols.push_back(j);
  }
  std::vector<Index> rmap(a.rows(), -1), cmap(a.cols(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) rmap[rows[i]] = static_cast<Index>(i);
  for (std::size_t j = 0; j < cols.size(); ++j) cmap[cols[j]] = static_cast<Index>(j);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows.size(), cols.size());
  for (const auto& [pos, v] : a.entries()) m(rmap[pos.first], cmap[pos.second]) = v;
  return m;
}

double power_iteration_norm(const SparseOperator& a) {
  const Index n = a.cols();
  std::vector<Complex> v(n);
  // Fixed start vector with unequal coordinates so it cannot be orthogonal
  // to every leading singular subspace encountered in practice.
  double nrm = 0.0;
  for (Index i = 0; i < n; ++i) {
    v[i] = Complex{1.0 + static_cast<double>(i) / (n + 1.0), 0.0};
    nrm += std::norm(v[i]);
  }
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;

  double prev = 0.0;
  for (int round = 0; round < kPowerMaxRounds; ++round) {
    const auto av = a.apply(v);
    auto w = a.apply_adjoint(av);
    double lambda = 0.0;  // Rayleigh quotient <w, v> for a*a, real by symmetry
    for (Index i = 0; i < n; ++i) lambda += (std::conj(v[i]) * w[i]).real();
    double wn = 0.0;
    for (const auto& x : w) wn += std::norm(x);
    wn = std::sqrt(wn);
    if (wn == 0.0) return 0.0;
    for (auto& x : w) x /= wn;
    v = std::move(w);
    const double sigma = std::sqrt(std::max(lambda, 0.0));
    if (round > 0 && std::abs(sigma - prev) <= kPowerRelTol * std::max(sigma, 1e-300))
      return sigma;
    prev = sigma;
  }
  return prev;
}

}  // namespace

double spectral_norm(const SparseOperator& a) {
  if (a.nnz() == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= kDenseLimit) {
    const Eigen::MatrixXcd m = compact_dense(a);
    return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()(0);
  }
  return power_iteration_norm(a);
}

bool rank_one_norm_identity_check(const SparseOperator& b, const SparseOperator& v,
                                  const SparseOperator& c) {
  // Rank check: every nonzero column must be proportional to the first one.
  std::vector<std::vector<std::pair<Index, Complex>>> columns(v.cols());
  for (const auto& [pos, val] : v.entries())
    columns[pos.second].emplace_back(pos.first, val);
  Index pivot = -1;
  for (Index x = 0; x < v.cols(); ++x) {
    if (columns[x].empty()) continue;
    if (pivot < 0) {
      pivot = x;
      continue;
    }
    // Proportionality via vanishing 2x2 minors against the pivot column.
    double pivot_norm = 0.0, col_norm = 0.0;
    for (const auto& [y, val] : columns[pivot]) pivot_norm += std::norm(val);
    for (const auto& [y, val] : columns[x]) col_norm += std::norm(val);
    const double scale = std::sqrt(pivot_norm * col_norm);
    auto value_at = [](const std::vector<std::pair<Index, Complex>>& col, Index y) {
      for (const auto& [yy, val] : col)
        if (yy == y) return val;
      return Complex{0.0, 0.0};
    };
    std::vector<Index> rows;
    for (const auto& [y, val] : columns[pivot]) rows.push_back(y);
    for (const auto& [y, val] : columns[x]) rows.push_back(y);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = i + 1; j < rows.size(); ++j) {
        const Complex det = value_at(columns[pivot], rows[i]) * value_at(columns[x], rows[j]) -
                            value_at(columns[pivot], rows[j]) * value_at(columns[x], rows[i]);
        if (std::abs(det) > 1e-12 * scale)
          throw std::invalid_argument(
              "rank_one_norm_identity_check: rank exceeds one, columns " +
              std::to_string(pivot) + " and " + std::to_string(x) +
              " are linearly independent");
      }
  }

  const double lhs = spectral_norm(v) * spectral_norm(b * v * c);
  const double rhs = spectral_norm(b * v) * spectral_norm(v * c);
  const double scale = std::max({lhs, rhs, 1e-300});
  return std::abs(lhs - rhs) <= 1e-9 * scale;
}

}  // namespace coarse
