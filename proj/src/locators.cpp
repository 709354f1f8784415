#include "coarse/locators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coarse {

namespace {

std::vector<double> row_norms(const SparseOperator& u) {
  std::vector<double> out(u.rows(), 0.0);
  for (const auto& [pos, v] : u.entries()) out[pos.first] += std::norm(v);
  for (auto& x : out) x = std::sqrt(x);
  return out;
}

}  // namespace

Locators locator_sets(const IsometryData& iso, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("locator_sets: threshold must be positive");
  Locators loc;
  loc.delta = delta;
  loc.y_of.assign(iso.u.cols(), {});
  loc.x_of.assign(iso.u.rows(), {});
  const auto rn = row_norms(iso.u);
  // Entries iterate in (row, col) order, so both families come out sorted.
  for (const auto& [pos, v] : iso.u.entries()) {
    const auto& [y, x] = pos;
    if (std::abs(v) * rn[y] > delta) {
      loc.y_of[x].push_back(y);
      loc.x_of[y].push_back(x);
    }
  }
  for (auto& set : loc.y_of) std::sort(set.begin(), set.end());
  return loc;
}

ConcentrationReport concentration_check(const IsometryData& iso, double eta, double eps) {
  if (!(eta > 0) || !(eps > 0))
    throw std::invalid_argument("concentration_check: thresholds must be positive");
  const Locators loc = locator_sets(iso, eta);
  ConcentrationReport report;
  report.eta = eta;
  report.eps = eps;

  std::vector<double> col_tail(iso.u.cols(), 0.0), row_tail(iso.u.rows(), 0.0);
  for (const auto& [pos, v] : iso.u.entries()) {
    const auto& [y, x] = pos;
    const double mass = std::norm(v);
    if (!std::binary_search(loc.y_of[x].begin(), loc.y_of[x].end(), y))
      col_tail[x] += mass;
    if (!std::binary_search(loc.x_of[y].begin(), loc.x_of[y].end(), x))
      row_tail[y] += mass;
  }
  for (Index x = 0; x < iso.u.cols(); ++x) {
    const double tail = std::sqrt(col_tail[x]);
    if (!(tail < eps)) report.column_violations.push_back({x, tail});
  }
  for (Index y = 0; y < iso.u.rows(); ++y) {
    const double tail = std::sqrt(row_tail[y]);
    if (!(tail < eps)) report.row_violations.push_back({y, tail});
  }
  report.pass = report.column_violations.empty() && report.row_violations.empty();
  return report;
}

MembershipCertificate entourage_union_level(const Locators& loc,
                                            const CoarseFiltration& target) {
  std::vector<IndexPair> pairs;
  for (const auto& ys : loc.y_of)
    for (Index y : ys)
      for (Index yp : ys) pairs.emplace_back(y, yp);
  return target.membership_level(Relation(target.domain(), std::move(pairs)));
}

}  // namespace coarse
