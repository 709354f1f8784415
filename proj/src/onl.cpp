#include "coarse/onl.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "coarse/rng.hpp"
#include "coarse/spectral.hpp"

namespace coarse {

namespace {

constexpr double kSlack = 1e-9;

/// Largest eigenvalue of a Hermitian PSD matrix, with an optional
/// warm-start direction. Returns the eigenvalue and leaves the (unit)
/// eigenvector estimate in vec.
double top_eigenvalue(const Eigen::MatrixXcd& g, Eigen::VectorXcd& vec) {
  const Eigen::Index n = g.rows();
  if (n <= 64) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g);
    vec = solver.eigenvectors().col(n - 1);
    return solver.eigenvalues()(n - 1);
  }
  if (vec.size() != n || vec.norm() == 0.0) {
    vec = Eigen::VectorXcd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) vec(i) += Complex(i / (n + 1.0), 0.0);
  }
  vec.normalize();
  double prev = 0.0;
  for (int round = 0; round < 2000; ++round) {
    Eigen::VectorXcd w = g * vec;
    const double lambda = std::real(vec.dot(w));
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    vec = w / wn;
    if (round > 0 && std::abs(lambda - prev) <= 1e-13 * std::max(lambda, 1e-300))
      return lambda;
    prev = lambda;
  }
  return prev;
}

}  // namespace

ONLReport onl_probe(const CoarseFiltration& f, int entourage_level, int m,
                    int num_samples, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("onl_probe: m must be at least 1");
  if (num_samples < 1) throw std::invalid_argument("onl_probe: need samples");
  const Index n = f.domain().size();
  if (n == 0) throw std::invalid_argument("onl_probe: empty ground set");

  ONLReport report;
  report.entourage_level = entourage_level;
  report.m = m;
  report.num_samples = num_samples;
  report.seed = seed;
  report.threshold = 1.0 - 1.0 / m;

  const Relation support_rel = f.level(entourage_level);

  struct SampleState {
    Eigen::MatrixXcd dense;
    Eigen::MatrixXcd gram;
    double norm = 0;
    std::map<Index, Eigen::VectorXcd> warm;  // per center
    ONLSample record;
  };
  std::vector<SampleState> states(num_samples);
  for (int i = 0; i < num_samples; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    std::vector<std::tuple<Index, Index, Complex>> entries;
    entries.reserve(support_rel.size());
    for (const auto& [x, y] : support_rel.pairs())
      entries.emplace_back(y, x, rng.complex_gaussian());
    const SparseOperator a(n, n, entries);
    states[i].dense = a.to_dense();
    states[i].gram = states[i].dense.adjoint() * states[i].dense;
    states[i].norm = spectral_norm(a);
    states[i].record.norm = states[i].norm;
  }

  bool passed = false;
  int k = 0;
  for (; k <= f.max_level(); ++k) {
    const auto balls = f.level(k).row_lists();
    double level_worst = 2.0;
    for (auto& st : states) {
      double best = -1.0;
      Index best_center = -1;
      for (Index c = 0; c < n; ++c) {
        const auto& ball = balls[c];
        Eigen::MatrixXcd sub(ball.size(), ball.size());
        for (std::size_t i = 0; i < ball.size(); ++i)
          for (std::size_t j = 0; j < ball.size(); ++j)
            sub(i, j) = st.gram(ball[i], ball[j]);
        Eigen::VectorXcd& warm = st.warm[c];
        if (warm.size() != static_cast<Eigen::Index>(ball.size())) {
          // Ball grew since the last level; restart from a spread vector.
          warm.resize(0);
        }
        const double lambda = top_eigenvalue(sub, warm);
        const double ratio = std::sqrt(std::max(lambda, 0.0)) / st.norm;
        if (ratio > best) {
          best = ratio;
          best_center = c;
        }
      }
      st.record.ratio_by_level.push_back(best);
      st.record.center = best_center;
      st.record.ball = balls[best_center];
      level_worst = std::min(level_worst, best);
    }
    if (level_worst >= report.threshold - kSlack) {
      passed = true;
      report.worst_ratio = level_worst;
      break;
    }
    report.worst_ratio = level_worst;
  }

  report.positive = passed;
  report.localization_level = passed ? k : f.max_level();

  for (auto& st : states) {
    // Witness: unit top singular direction of the localized operator.
    const auto& ball = st.record.ball;
    Eigen::MatrixXcd sub(ball.size(), ball.size());
    for (std::size_t i = 0; i < ball.size(); ++i)
      for (std::size_t j = 0; j < ball.size(); ++j)
        sub(i, j) = st.gram(ball[i], ball[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
    const Eigen::VectorXcd top = solver.eigenvectors().col(ball.size() - 1);
    st.record.witness.assign(n, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < ball.size(); ++i)
      st.record.witness[ball[i]] = top(i) / top.norm();
    report.samples.push_back(std::move(st.record));
  }
  return report;
}

bool propertyA_witness_check(const CoarseFiltration& f, int entourage_level, int m,
                             int support_level,
                             const std::vector<std::vector<Complex>>& xi) {
  if (m < 1) throw std::invalid_argument("propertyA_witness_check: m must be >= 1");
  const Index n = f.domain().size();
  if (static_cast<Index>(xi.size()) != n)
    throw std::invalid_argument("propertyA_witness_check: one vector per point required");
  for (const auto& v : xi)
    if (static_cast<Index>(v.size()) != n)
      throw std::invalid_argument("propertyA_witness_check: vector length mismatch");

  for (const auto& v : xi) {
    double norm2 = 0.0;
    for (const auto& c : v) norm2 += std::norm(c);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) return false;
  }

  const auto support_balls = f.level(support_level).row_lists();
  for (Index x = 0; x < n; ++x)
    for (Index i = 0; i < n; ++i)
      if (xi[x][i] != Complex{0.0, 0.0} &&
          !std::binary_search(support_balls[x].begin(), support_balls[x].end(), i))
        return false;

  const double bound = 1.0 / m;
  const Relation entourage = f.level(entourage_level);
  for (const auto& [x, xp] : entourage.pairs()) {
    double diff2 = 0.0;
    for (Index i = 0; i < n; ++i) diff2 += std::norm(xi[x][i] - xi[xp][i]);
    if (!(std::sqrt(diff2) < bound)) return false;
  }
  return true;
}

}  // namespace coarse
