#include "coarse/recovery.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "coarse/matching.hpp"

namespace coarse {

IndexMap identity_map(Index n) {
  IndexMap m(n);
  for (Index i = 0; i < n; ++i) m[i] = i;
  return m;
}

bool map_total(const IndexMap& m) {
  return std::all_of(m.begin(), m.end(), [](Index v) { return v >= 0; });
}

bool map_injective(const IndexMap& m) {
  std::vector<Index> defined;
  for (Index v : m)
    if (v >= 0) defined.push_back(v);
  std::sort(defined.begin(), defined.end());
  return std::adjacent_find(defined.begin(), defined.end()) == defined.end();
}

DistortionReport verify_coarse_expanding(const IndexMap& map,
                                         const CoarseFiltration& source,
                                         const CoarseFiltration& target, int depth) {
  if (static_cast<Index>(map.size()) != source.domain().size())
    throw std::invalid_argument("verify_coarse_expanding: map length mismatch");
  const Index ny = target.domain().size();
  for (Index v : map)
    if (v >= ny)
      throw std::out_of_range("verify_coarse_expanding: image outside target");
  if (depth < 0 || depth > source.max_level() || depth > target.max_level())
    throw std::invalid_argument("verify_coarse_expanding: depth beyond level cap");

  DistortionReport report;
  for (int k = 0; k <= depth; ++k) {
    std::vector<IndexPair> image;
    const Relation source_level = source.level(k);
    for (const auto& [x, xp] : source_level.pairs())
      if (map[x] >= 0 && map[xp] >= 0) image.emplace_back(map[x], map[xp]);
    report.forward.push_back(
        target.membership_level(Relation(target.domain(), std::move(image))));

    std::vector<IndexPair> preimage;
    const Relation target_level = target.level(k);
    for (Index x = 0; x < source.domain().size(); ++x) {
      if (map[x] < 0) continue;
      for (Index xp = 0; xp < source.domain().size(); ++xp)
        if (map[xp] >= 0 && target_level.contains({map[x], map[xp]}))
          preimage.emplace_back(x, xp);
    }
    report.backward.push_back(
        source.membership_level(Relation(source.domain(), std::move(preimage))));
  }
  return report;
}

MembershipCertificate closeness_level(const IndexMap& map1, const IndexMap& map2,
                                      const CoarseFiltration& codomain) {
  if (map1.size() != map2.size())
    throw std::invalid_argument("closeness_level: maps need a common domain");
  const Index ny = codomain.domain().size();
  std::vector<IndexPair> pairs;
  for (std::size_t x = 0; x < map1.size(); ++x) {
    if (map1[x] < 0 || map2[x] < 0) continue;
    if (map1[x] >= ny || map2[x] >= ny)
      throw std::out_of_range("closeness_level: image outside codomain");
    pairs.emplace_back(map1[x], map2[x]);
  }
  return codomain.membership_level(Relation(codomain.domain(), std::move(pairs)));
}

IndexMap cantor_bernstein(const IndexMap& f, const IndexMap& g) {
  const Index nx = static_cast<Index>(f.size());
  const Index ny = static_cast<Index>(g.size());
  for (Index v : f)
    if (v < 0 || v >= ny) throw std::invalid_argument("cantor_bernstein: f not total into Y");
  for (Index v : g)
    if (v < 0 || v >= nx) throw std::invalid_argument("cantor_bernstein: g not total into X");
  if (!map_injective(f)) throw std::invalid_argument("cantor_bernstein: f not injective");
  if (!map_injective(g)) throw std::invalid_argument("cantor_bernstein: g not injective");
  if (nx != ny)
    throw std::invalid_argument("cantor_bernstein: injections force equal sizes");

  std::vector<Index> g_inv(nx, -1), f_inv(ny, -1);
  for (Index y = 0; y < ny; ++y) g_inv[g[y]] = y;
  for (Index x = 0; x < nx; ++x) f_inv[f[x]] = x;

  // Chains from Y-origins take g^{-1}; everything else, including cycles
  // and chains from X-origins, takes f.
  std::vector<char> from_y(nx, 0), visited(nx, 0);
  for (Index y0 = 0; y0 < ny; ++y0) {
    if (f_inv[y0] >= 0) continue;  // not an origin
    Index x = g[y0];
    while (x >= 0 && !visited[x]) {
      visited[x] = 1;
      from_y[x] = 1;
      x = g[f[x]];
    }
  }

  IndexMap h(nx);
  for (Index x = 0; x < nx; ++x) h[x] = from_y[x] ? g_inv[x] : f[x];
  return h;
}

MapRecovery recover_maps(const Locators& loc, bool require_injective) {
  MapRecovery out;
  const Index nx = static_cast<Index>(loc.y_of.size());
  const Index ny = static_cast<Index>(loc.x_of.size());
  out.f.assign(nx, -1);
  out.g.assign(ny, -1);

  for (Index x = 0; x < nx; ++x)
    if (loc.y_of[x].empty()) out.empty_y_locators.push_back(x);
  for (Index y = 0; y < ny; ++y)
    if (loc.x_of[y].empty()) out.empty_x_locators.push_back(y);
  if (!out.empty_y_locators.empty()) return out;  // f unrecoverable

  if (require_injective) {
    const SelectorResult sel = hall_selector(loc.y_of);
    if (!sel.selector) {
      out.hall_witness_f = sel.deficiency_witness;
      return out;
    }
    out.f = *sel.selector;

    std::vector<std::vector<Index>> defined;
    std::vector<Index> back;
    for (Index y = 0; y < ny; ++y)
      if (!loc.x_of[y].empty()) {
        defined.push_back(loc.x_of[y]);
        back.push_back(y);
      }
    const SelectorResult gsel = hall_selector(defined);
    if (!gsel.selector) {
      std::vector<Index> witness;
      for (Index i : *gsel.deficiency_witness) witness.push_back(back[i]);
      out.hall_witness_g = std::move(witness);
      return out;
    }
    for (std::size_t i = 0; i < back.size(); ++i) out.g[back[i]] = (*gsel.selector)[i];
  } else {
    for (Index x = 0; x < nx; ++x) out.f[x] = loc.y_of[x].front();
    for (Index y = 0; y < ny; ++y)
      if (!loc.x_of[y].empty()) out.g[y] = loc.x_of[y].front();
  }

  out.ok = true;
  out.g_total = out.empty_x_locators.empty();
  out.f_injective = map_injective(out.f);
  out.g_injective = map_injective(out.g);
  return out;
}

MapRecovery recover_maps(const IsometryData& iso, double delta, bool require_injective) {
  return recover_maps(locator_sets(iso, delta), require_injective);
}

PipelineResult full_pipeline(const IsometryData& iso, const PipelineConfig& config) {
  if (iso.u.cols() != iso.source.domain().size() ||
      iso.u.rows() != iso.target.domain().size())
    throw std::invalid_argument("full_pipeline: operator shape differs from the spaces");
  const double eta = config.eta.value_or(config.delta);

  PipelineResult result;
  auto log_ok = [&](const std::string& stage, const std::string& detail) {
    result.log.push_back({stage, StageStatus::ok, detail});
  };
  auto fail = [&](const std::string& stage, const std::string& detail) {
    result.log.push_back({stage, StageStatus::failed, detail});
    result.failed_stage = stage;
    return result;
  };

  result.isometry_defect = isometry_defect(iso.u);
  {
    std::ostringstream os;
    os << "defect " << result.isometry_defect << " against tolerance " << config.isometry_tol;
    if (result.isometry_defect > config.isometry_tol)
      return fail("check_isometry", os.str());
    log_ok("check_isometry", os.str());
  }

  result.locators = locator_sets(iso, config.delta);
  {
    std::size_t largest = 0;
    for (const auto& s : result.locators->y_of) largest = std::max(largest, s.size());
    for (const auto& s : result.locators->x_of) largest = std::max(largest, s.size());
    log_ok("locators", "largest locator set has " + std::to_string(largest) + " points");
  }

  result.concentration = concentration_check(iso, eta, config.eps);
  if (!result.concentration->pass) {
    return fail("concentration",
                std::to_string(result.concentration->column_violations.size()) +
                    " column and " +
                    std::to_string(result.concentration->row_violations.size()) +
                    " row tails at or above the bound");
  }
  log_ok("concentration", "all tails below the bound");

  result.recovery = recover_maps(*result.locators, config.require_bijection);
  if (!result.recovery->ok) {
    if (!result.recovery->empty_y_locators.empty())
      return fail("recovery", std::to_string(result.recovery->empty_y_locators.size()) +
                                  " source points have empty locator sets");
    return fail("recovery", "distinct-representative selection failed, witness recorded");
  }
  log_ok("recovery", result.recovery->g_total ? "f and g recovered"
                                              : "f recovered, g partial");

  RecoveredEquivalence eq;
  eq.f = result.recovery->f;
  eq.g = result.recovery->g;
  if (config.require_bijection) {
    if (result.recovery->g_total && result.recovery->f_injective &&
        result.recovery->g_injective) {
      eq.h = cantor_bernstein(eq.f, eq.g);
      log_ok("bijection", "assembled from the recovered injections");
    } else {
      std::string reason = result.recovery->g_total
                               ? "recovered maps not injective"
                               : "g undefined on " +
                                     std::to_string(result.recovery->empty_x_locators.size()) +
                                     " target points";
      result.log.push_back({"bijection", StageStatus::skipped, reason});
    }
  } else {
    result.log.push_back({"bijection", StageStatus::skipped, "not requested"});
  }

  eq.distortion_f = verify_coarse_expanding(eq.f, iso.source, iso.target, config.depth);
  eq.distortion_g = verify_coarse_expanding(eq.g, iso.target, iso.source, config.depth);
  log_ok("distortion", "forward and backward tables at depth " +
                           std::to_string(config.depth));

  IndexMap gf(iso.source.domain().size(), -1), fg(iso.target.domain().size(), -1);
  for (Index x = 0; x < iso.source.domain().size(); ++x)
    if (eq.f[x] >= 0) gf[x] = eq.g[eq.f[x]];
  for (Index y = 0; y < iso.target.domain().size(); ++y)
    if (eq.g[y] >= 0) fg[y] = eq.f[eq.g[y]];
  eq.closeness_gf = closeness_level(gf, identity_map(iso.source.domain().size()), iso.source);
  eq.closeness_fg = closeness_level(fg, identity_map(iso.target.domain().size()), iso.target);
  eq.entourage_level = entourage_union_level(*result.locators, iso.target);
  log_ok("certificates", "closeness and entourage levels recorded");

  result.equivalence = std::move(eq);
  result.success = true;
  return result;
}

}  // namespace coarse
