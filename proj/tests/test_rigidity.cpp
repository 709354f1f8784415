#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "coarse/isometry.hpp"
#include "coarse/locators.hpp"
#include "coarse/recovery.hpp"
#include "coarse/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coarse;

namespace {

CoarseFiltration band_space(Index n, Index radius, int max_level) {
  return metric_filtration(Relation::band(GroundSet(n), radius), max_level);
}

IsometryData isometry_from_dense(const Eigen::MatrixXcd& u, Index nx, Index ny) {
  IsometryData iso{SparseOperator::from_dense(u), band_space(nx, 1, nx + 2),
                   band_space(ny, 1, ny + 2)};
  return iso;
}

}  // namespace

TEST_CASE("locator sets match the dense compressed-conjugate oracle") {
  Rng rng(701);
  const double delta = 0.35;
  for (int trial = 0; trial < 12; ++trial) {
    const Index nx = 2 + static_cast<Index>(rng.below(8));
    const Index ny = nx + static_cast<Index>(rng.below(4));
    const Eigen::MatrixXcd u = oracle::random_isometry(rng, ny, nx);
    const Locators loc = locator_sets(isometry_from_dense(u, nx, ny), delta);
    CHECK(loc.delta == delta);
    REQUIRE(static_cast<Index>(loc.y_of.size()) == nx);
    REQUIRE(static_cast<Index>(loc.x_of.size()) == ny);
    for (Index x = 0; x < nx; ++x)
      for (Index y = 0; y < ny; ++y) {
        const bool member = std::binary_search(loc.y_of[x].begin(),
                                               loc.y_of[x].end(), y);
        CHECK(member == (oracle::locator_value_oracle(u, x, y) > delta));
      }
  }
}

TEST_CASE("locator families are symmetric and obey the size bound") {
  Rng rng(702);
  for (const double delta : {0.3, 0.45, 0.6}) {
    const Index nx = 20, ny = 24;
    const Eigen::MatrixXcd u = oracle::random_isometry(rng, ny, nx);
    const Locators loc = locator_sets(isometry_from_dense(u, nx, ny), delta);
    const double cap = 1.0 / (delta * delta);
    for (Index x = 0; x < nx; ++x) {
      CHECK(static_cast<double>(loc.y_of[x].size()) < cap);
      for (Index y : loc.y_of[x])
        CHECK(std::binary_search(loc.x_of[y].begin(), loc.x_of[y].end(), x));
    }
    for (Index y = 0; y < ny; ++y) {
      CHECK(static_cast<double>(loc.x_of[y].size()) < cap);
      for (Index x : loc.x_of[y])
        CHECK(std::binary_search(loc.y_of[x].begin(), loc.y_of[x].end(), y));
    }
  }
}

TEST_CASE("permutation isometries have singleton locators") {
  const Index n = 12;
  IndexMap sigma(n);
  for (Index i = 0; i < n; ++i) sigma[i] = (i + 5) % n;
  const IsometryData iso =
      embed_from_map(sigma, band_space(n, 1, n + 2), band_space(n, 1, n + 2));
  const Locators loc = locator_sets(iso, 0.5);
  for (Index x = 0; x < n; ++x) {
    REQUIRE(loc.y_of[x].size() == 1);
    CHECK(loc.y_of[x][0] == sigma[x]);
  }
  for (Index y = 0; y < n; ++y) {
    REQUIRE(loc.x_of[y].size() == 1);
    CHECK(sigma[loc.x_of[y][0]] == y);
  }
}

TEST_CASE("concentration passes exactly concentrated columns and lists spread ones") {
  const Index n = 6;
  IndexMap sigma(n);
  for (Index i = 0; i < n; ++i) sigma[i] = (n - 1) - i;
  const IsometryData perm =
      embed_from_map(sigma, band_space(n, 1, n + 2), band_space(n, 1, n + 2));
  const ConcentrationReport good = concentration_check(perm, 0.5, 0.4);
  CHECK(good.pass);
  CHECK(good.column_violations.empty());
  CHECK(good.row_violations.empty());
  CHECK(good.eta == 0.5);
  CHECK(good.eps == 0.4);

  // One column spread evenly over two rows: at eta 0.8 its locator is
  // empty, so the full unit mass sits in the tail.
  const double r = 1.0 / std::sqrt(2.0);
  SparseOperator u(2, 1, {{0, 0, Complex(r, 0.0)}, {1, 0, Complex(r, 0.0)}});
  IsometryData spread{u, band_space(1, 1, 3), band_space(2, 1, 3)};
  const ConcentrationReport bad = concentration_check(spread, 0.8, 0.4);
  CHECK(!bad.pass);
  REQUIRE(bad.column_violations.size() == 1);
  CHECK(bad.column_violations[0].point == 0);
  CHECK(bad.column_violations[0].tail == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(bad.row_violations.size() == 2);
  // Each row holds half the mass, so the leftover l2 norm is sqrt(1/2).
  CHECK(bad.row_violations[0].tail ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("tails are compared strictly against the bound") {
  // Column masses 3/4 and 1/4; at eta 0.5 only the heavy row locates, so
  // the tail is exactly sqrt(1/4) = 0.5 and the bound 0.5 itself must fail.
  SparseOperator u(2, 1,
                   {{0, 0, Complex(std::sqrt(3.0) / 2.0, 0.0)},
                    {1, 0, Complex(0.5, 0.0)}});
  IsometryData iso{u, band_space(1, 1, 3), band_space(2, 1, 3)};
  const ConcentrationReport at_bound = concentration_check(iso, 0.5, 0.5);
  CHECK(!at_bound.pass);
  REQUIRE(at_bound.column_violations.size() == 1);
  CHECK(at_bound.column_violations[0].tail == 0.5);
  const ConcentrationReport above = concentration_check(iso, 0.5, 0.5000001);
  CHECK(above.pass);
}

TEST_CASE("map recovery refuses empty source locators") {
  Locators loc;
  loc.delta = 0.9;
  loc.y_of = {{0}, {}};
  loc.x_of = {{0}};
  const MapRecovery rec = recover_maps(loc, false);
  CHECK(!rec.ok);
  CHECK(rec.empty_y_locators == std::vector<Index>{1});
  CHECK(std::all_of(rec.f.begin(), rec.f.end(), [](Index v) { return v == -1; }));
}

TEST_CASE("map recovery leaves g partial on empty target locators") {
  Locators loc;
  loc.delta = 0.5;
  loc.y_of = {{0}, {2}};
  loc.x_of = {{0}, {}, {1}};
  const MapRecovery rec = recover_maps(loc, true);
  CHECK(rec.ok);
  CHECK(!rec.g_total);
  CHECK(rec.empty_x_locators == std::vector<Index>{1});
  CHECK(rec.f == IndexMap{0, 2});
  CHECK(rec.g == IndexMap{0, -1, 1});
  CHECK(rec.f_injective);
  CHECK(rec.g_injective);
}

TEST_CASE("injective recovery forwards a Hall deficiency witness") {
  Locators loc;
  loc.delta = 0.5;
  loc.y_of = {{0}, {0}};
  loc.x_of = {{0, 1}, {}};
  const MapRecovery strict = recover_maps(loc, true);
  CHECK(!strict.ok);
  REQUIRE(strict.hall_witness_f.has_value());
  std::vector<Index> wf = *strict.hall_witness_f;
  std::sort(wf.begin(), wf.end());
  CHECK(wf == std::vector<Index>{0, 1});

  // Without the injectivity requirement both points take the same image.
  const MapRecovery loose = recover_maps(loc, false);
  CHECK(loose.ok);
  CHECK(loose.f == IndexMap{0, 0});
  CHECK(!loose.f_injective);
}

TEST_CASE("recovery witness on the g side names target points") {
  Locators loc;
  loc.delta = 0.5;
  loc.y_of = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  loc.x_of = {{2}, {}, {2}};
  const MapRecovery rec = recover_maps(loc, true);
  CHECK(!rec.ok);
  REQUIRE(rec.hall_witness_g.has_value());
  std::vector<Index> wg = *rec.hall_witness_g;
  std::sort(wg.begin(), wg.end());
  CHECK(wg == std::vector<Index>{0, 2});
}

TEST_CASE("non-injective recovery takes the smallest locator member") {
  Locators loc;
  loc.delta = 0.5;
  loc.y_of = {{2, 5}};
  loc.x_of = {{}, {}, {0}, {}, {}, {0}};
  const MapRecovery rec = recover_maps(loc, false);
  CHECK(rec.f == IndexMap{2});
}

TEST_CASE("chain chasing inverts mutually inverse injections") {
  const Index n = 9;
  IndexMap f(n), g(n);
  for (Index i = 0; i < n; ++i) {
    f[i] = (i * 2) % n;
    g[(i * 2) % n] = i;
  }
  CHECK(cantor_bernstein(f, g) == f);
}

TEST_CASE("chain chasing on equal finite sets follows f along its cycles") {
  // Total injections between equal finite sets are bijections, so every
  // chain closes into a cycle and the assembled map is f itself.
  Rng rng(703);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(12));
    IndexMap f(n), g(n);
    for (Index i = 0; i < n; ++i) f[i] = g[i] = i;
    rng.shuffle(f);
    rng.shuffle(g);
    const IndexMap h = cantor_bernstein(f, g);
    CHECK(map_total(h));
    CHECK(map_injective(h));
    CHECK(h == f);
  }
}

TEST_CASE("chain chasing validates totality, injectivity and sizes") {
  CHECK_THROWS_AS(cantor_bernstein({0, -1}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(cantor_bernstein({0, 1}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(cantor_bernstein({0, 2}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(cantor_bernstein({0, 1, 2}, {0, 1}), std::invalid_argument);
}

TEST_CASE("the identity map certifies level-for-level membership") {
  const CoarseFiltration f = band_space(15, 1, 20);
  const DistortionReport rep =
      verify_coarse_expanding(identity_map(15), f, f, 10);
  REQUIRE(rep.forward.size() == 11);
  REQUIRE(rep.backward.size() == 11);
  for (int k = 0; k <= 10; ++k) {
    CHECK(rep.forward[k].contained);
    CHECK(rep.forward[k].level == k);
    CHECK(rep.backward[k].contained);
    CHECK(rep.backward[k].level == k);
  }
}

TEST_CASE("bounded displacement shows up as a bounded level shift") {
  const Index n = 30;
  // Swap adjacent pairs: displacement 1, so level k lands by level k + 2.
  IndexMap swap_map(n);
  for (Index i = 0; i < n; ++i) swap_map[i] = i % 2 == 0 ? i + 1 : i - 1;
  const CoarseFiltration f = band_space(n, 1, 40);
  const DistortionReport rep = verify_coarse_expanding(swap_map, f, f, 8);
  for (int k = 0; k <= 8; ++k) {
    REQUIRE(rep.forward[k].contained);
    CHECK(rep.forward[k].level <= k + 2);
    CHECK(rep.forward[k].level >= k - 2);
  }
}

TEST_CASE("structure-shattering maps are refused with a witness pair") {
  const Index n = 32;
  IndexMap scatter(n);
  for (Index i = 0; i < n; ++i) scatter[i] = (i * 13) % n;
  const CoarseFiltration f = band_space(n, 1, 6);
  const DistortionReport rep = verify_coarse_expanding(scatter, f, f, 1);
  CHECK(!rep.forward[1].contained);
  REQUIRE(rep.forward[1].witness_pair.has_value());
  const auto [a, b] = *rep.forward[1].witness_pair;
  // The witness is an image pair outside every level up to the cap.
  CHECK(!f.level(6).contains({a, b}));
}

TEST_CASE("distortion tables respect partial maps and input validation") {
  const CoarseFiltration f = band_space(10, 1, 12);
  IndexMap partial(10, -1);
  partial[2] = 2;
  partial[3] = 3;
  const DistortionReport rep = verify_coarse_expanding(partial, f, f, 3);
  for (int k = 0; k <= 3; ++k) CHECK(rep.forward[k].contained);
  CHECK(rep.forward[1].level == 1);  // the surviving pair (2,3)

  CHECK_THROWS_AS(verify_coarse_expanding(IndexMap(9, 0), f, f, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_coarse_expanding(identity_map(10), f, f, 13),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_coarse_expanding(identity_map(10), f, f, -1),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_coarse_expanding(IndexMap(10, 99), f, f, 3),
                  std::out_of_range);
}

TEST_CASE("closeness level measures the pointwise graph of two maps") {
  const CoarseFiltration f = band_space(20, 1, 25);
  const IndexMap id = identity_map(20);
  CHECK(closeness_level(id, id, f).level == 0);

  IndexMap shifted(20);
  for (Index i = 0; i < 20; ++i) shifted[i] = std::min<Index>(19, i + 3);
  const MembershipCertificate cert = closeness_level(shifted, id, f);
  CHECK(cert.contained);
  CHECK(cert.level == 3);

  IndexMap sparse(20, -1);
  sparse[4] = 5;
  const MembershipCertificate partial = closeness_level(sparse, id, f);
  CHECK(partial.contained);
  CHECK(partial.level == 1);

  CHECK_THROWS_AS(closeness_level(identity_map(3), identity_map(4), f),
                  std::invalid_argument);
}

TEST_CASE("embedding a map gives an exact isometry into the image corner") {
  const Index nx = 8, ny = 20;
  IndexMap dbl(nx);
  for (Index i = 0; i < nx; ++i) dbl[i] = 2 * i;
  const IsometryData iso =
      embed_from_map(dbl, band_space(nx, 1, 10), band_space(ny, 2, 12));
  CHECK(isometry_defect(iso.u) == 0.0);
  CHECK(check_isometry(iso.u));
  const Eigen::MatrixXcd p = iso.u.to_dense() * iso.u.to_dense().adjoint();
  for (Index y = 0; y < ny; ++y) {
    const double want = (y % 2 == 0 && y < 2 * nx) ? 1.0 : 0.0;
    CHECK(std::abs(p(y, y) - want) == 0.0);
  }

  CHECK_THROWS_AS(embed_from_map({0, 0}, band_space(2, 1, 3), band_space(3, 1, 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(embed_from_map({0, 7}, band_space(2, 1, 3), band_space(3, 1, 3)),
                  std::out_of_range);
  CHECK_THROWS_AS(embed_from_map({0}, band_space(2, 1, 3), band_space(3, 1, 3)),
                  std::invalid_argument);
}

TEST_CASE("isometry defect is the operator distance of u*u from the identity") {
  const Index n = 5;
  const IsometryData id =
      embed_from_map(identity_map(n), band_space(n, 1, 6), band_space(n, 1, 6));
  CHECK(isometry_defect(id.u) == 0.0);

  std::vector<std::tuple<Index, Index, Complex>> entries;
  for (Index i = 0; i < n; ++i) entries.emplace_back(i, i, Complex(0.9, 0.0));
  const SparseOperator scaled(n, n, entries);
  CHECK(isometry_defect(scaled) == doctest::Approx(1.0 - 0.81).epsilon(1e-12));
}

TEST_CASE("pipeline recovers a permutation end to end") {
  const Index n = 24;
  IndexMap sigma(n);
  for (Index i = 0; i < n; ++i) sigma[i] = (i + 7) % n;
  const IsometryData iso =
      embed_from_map(sigma, band_space(n, 1, 30), band_space(n, 1, 30));
  PipelineConfig cfg;
  cfg.depth = 10;
  const PipelineResult pr = full_pipeline(iso, cfg);
  CHECK(pr.success);
  CHECK(pr.failed_stage.empty());
  REQUIRE(pr.equivalence.has_value());
  REQUIRE(pr.equivalence->h.has_value());
  CHECK(*pr.equivalence->h == sigma);
  CHECK(pr.equivalence->closeness_gf.level == 0);
  CHECK(pr.equivalence->closeness_fg.level == 0);
  CHECK(pr.equivalence->entourage_level.level == 0);
  for (const auto& entry : pr.log) CHECK(entry.status != StageStatus::failed);
}

TEST_CASE("pipeline stops at the isometry check for defective operators") {
  const Index n = 4;
  // Missing column mass: u sends the last basis vector to zero.
  std::vector<std::tuple<Index, Index, Complex>> entries;
  for (Index i = 0; i + 1 < n; ++i) entries.emplace_back(i, i, Complex(1.0, 0.0));
  IsometryData iso{SparseOperator(n, n, entries), band_space(n, 1, 6),
                   band_space(n, 1, 6)};
  const PipelineResult pr = full_pipeline(iso, {});
  CHECK(!pr.success);
  CHECK(pr.failed_stage == "check_isometry");
  CHECK(pr.isometry_defect == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(!pr.log.empty());
  CHECK(pr.log.back().status == StageStatus::failed);
  CHECK(!pr.locators.has_value());
}

TEST_CASE("pipeline skips the bijection stage for strict embeddings") {
  const Index nx = 8, ny = 16;
  IndexMap dbl(nx);
  for (Index i = 0; i < nx; ++i) dbl[i] = 2 * i;
  const IsometryData iso =
      embed_from_map(dbl, band_space(nx, 1, 12), band_space(ny, 2, 14));
  PipelineConfig cfg;
  cfg.depth = 8;
  const PipelineResult pr = full_pipeline(iso, cfg);
  CHECK(pr.success);
  REQUIRE(pr.equivalence.has_value());
  CHECK(!pr.equivalence->h.has_value());
  CHECK(pr.equivalence->f == dbl);
  bool saw_skip = false;
  for (const auto& entry : pr.log)
    if (entry.stage == "bijection") {
      CHECK(entry.status == StageStatus::skipped);
      CHECK(entry.detail.find("8 target points") != std::string::npos);
      saw_skip = true;
    }
  CHECK(saw_skip);
}

TEST_CASE("pipeline rejects operators whose shape ignores the spaces") {
  IsometryData iso{SparseOperator(3, 3, {}), band_space(4, 1, 5),
                   band_space(3, 1, 5)};
  CHECK_THROWS_AS(full_pipeline(iso, {}), std::invalid_argument);
}
