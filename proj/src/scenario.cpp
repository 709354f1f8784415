#include "coarse/scenario.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coarse/isometry.hpp"
#include "coarse/rng.hpp"

namespace coarse {

const char* kArtifactVersion = "1.0.0";

namespace fs = std::filesystem;

namespace {

// Substream indices for generation draws; large offsets keep them clear
// of the per-sample substreams used by probes.
constexpr std::uint64_t kPermutationStream = 1000001;
constexpr std::uint64_t kHermitianStream = 1000002;

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Json j;
  in >> j;
  return j;
}

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

long long get_int(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key))
    throw std::invalid_argument(ctx + ": missing field \"" + key + "\"");
  if (!j[key].is_number_integer())
    throw std::invalid_argument(ctx + ": field \"" + key + "\" must be an integer");
  return j[key].get<long long>();
}

double get_double(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key))
    throw std::invalid_argument(ctx + ": missing field \"" + key + "\"");
  if (!j[key].is_number())
    throw std::invalid_argument(ctx + ": field \"" + key + "\" must be a number");
  return j[key].get<double>();
}

std::string get_string(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key))
    throw std::invalid_argument(ctx + ": missing field \"" + key + "\"");
  if (!j[key].is_string())
    throw std::invalid_argument(ctx + ": field \"" + key + "\" must be a string");
  return j[key].get<std::string>();
}

SpaceSpec parse_space(const Json& j, const std::string& ctx) {
  SpaceSpec s;
  s.kind = get_string(j, "kind", ctx);
  if (j.contains("max_level"))
    s.max_level = static_cast<int>(get_int(j, "max_level", ctx));
  if (s.kind == "interval_band") {
    reject_unknown_keys(j, {"kind", "max_level", "size", "radius"}, ctx);
    s.size = static_cast<Index>(get_int(j, "size", ctx));
    s.radius = static_cast<Index>(get_int(j, "radius", ctx));
  } else if (s.kind == "metric_points") {
    reject_unknown_keys(j, {"kind", "max_level", "points", "radius"}, ctx);
    if (!j.contains("points") || !j["points"].is_array())
      throw std::invalid_argument(ctx + ": field \"points\" must be an array");
    for (const auto& p : j["points"]) {
      std::vector<long long> coords;
      for (const auto& c : p) coords.push_back(c.get<long long>());
      s.points.push_back(std::move(coords));
    }
    s.point_radius = get_int(j, "radius", ctx);
  } else if (s.kind == "group") {
    reject_unknown_keys(j, {"kind", "max_level", "group", "n", "generating_set"},
                        ctx);
    s.group_name = get_string(j, "group", ctx);
    s.group_n = static_cast<Index>(get_int(j, "n", ctx));
    if (!j.contains("generating_set"))
      throw std::invalid_argument(ctx + ": missing field \"generating_set\"");
    for (const auto& g : j["generating_set"])
      s.generating_set.push_back(g.get<Index>());
  } else if (s.kind == "filter") {
    reject_unknown_keys(j, {"kind", "max_level", "size", "radius", "base"}, ctx);
    s.size = static_cast<Index>(get_int(j, "size", ctx));
    s.radius = static_cast<Index>(get_int(j, "radius", ctx));
    if (!j.contains("base"))
      throw std::invalid_argument(ctx + ": missing field \"base\"");
    for (const auto& b : j["base"]) {
      std::vector<Index> set;
      for (const auto& x : b) set.push_back(x.get<Index>());
      s.base.push_back(std::move(set));
    }
  } else if (s.kind == "explicit") {
    reject_unknown_keys(j, {"kind", "max_level", "generator"}, ctx);
    if (!j.contains("generator"))
      throw std::invalid_argument(ctx + ": missing field \"generator\"");
    s.generator = j["generator"];
  } else if (s.kind == "amplified") {
    reject_unknown_keys(j, {"kind", "inner", "copies"}, ctx);
    if (!j.contains("inner"))
      throw std::invalid_argument(ctx + ": missing field \"inner\"");
    s.inner = std::make_shared<SpaceSpec>(parse_space(j["inner"], ctx + ".inner"));
    s.copies = static_cast<Index>(get_int(j, "copies", ctx));
  } else {
    throw std::invalid_argument(ctx + ": unknown space kind \"" + s.kind + "\"");
  }
  return s;
}

Json space_to_json(const SpaceSpec& s) {
  Json j{{"kind", s.kind}};
  if (s.kind == "interval_band") {
    j["size"] = s.size;
    j["radius"] = s.radius;
    j["max_level"] = s.max_level;
  } else if (s.kind == "metric_points") {
    j["points"] = s.points;
    j["radius"] = s.point_radius;
    j["max_level"] = s.max_level;
  } else if (s.kind == "group") {
    j["group"] = s.group_name;
    j["n"] = s.group_n;
    j["generating_set"] = s.generating_set;
    j["max_level"] = s.max_level;
  } else if (s.kind == "filter") {
    j["size"] = s.size;
    j["radius"] = s.radius;
    j["base"] = s.base;
    j["max_level"] = s.max_level;
  } else if (s.kind == "explicit") {
    j["generator"] = *s.generator;
    j["max_level"] = s.max_level;
  } else if (s.kind == "amplified") {
    j["inner"] = space_to_json(*s.inner);
    j["copies"] = s.copies;
  }
  return j;
}

IsometrySpec parse_isometry(const Json& j, const std::string& ctx,
                            const fs::path& dir) {
  IsometrySpec s;
  s.kind = get_string(j, "kind", ctx);
  if (s.kind == "permutation") {
    reject_unknown_keys(j, {"kind", "max_displacement"}, ctx);
    s.max_displacement = static_cast<Index>(get_int(j, "max_displacement", ctx));
  } else if (s.kind == "perturbed_permutation") {
    reject_unknown_keys(j, {"kind", "max_displacement", "theta", "h_band_radius"},
                        ctx);
    s.max_displacement = static_cast<Index>(get_int(j, "max_displacement", ctx));
    s.theta = get_double(j, "theta", ctx);
    s.h_band_radius = static_cast<Index>(get_int(j, "h_band_radius", ctx));
  } else if (s.kind == "embedding_map") {
    reject_unknown_keys(j, {"kind", "map"}, ctx);
    if (!j.contains("map") || !j["map"].is_array())
      throw std::invalid_argument(ctx + ": field \"map\" must be an array");
    for (const auto& v : j["map"]) s.map.push_back(v.get<Index>());
  } else if (s.kind == "explicit_file") {
    reject_unknown_keys(j, {"kind", "file"}, ctx);
    s.file = get_string(j, "file", ctx);
    if (!fs::exists(dir / s.file))
      throw std::invalid_argument(ctx + ": referenced file \"" + s.file +
                                  "\" does not exist");
  } else {
    throw std::invalid_argument(ctx + ": unknown isometry kind \"" + s.kind + "\"");
  }
  return s;
}

Json isometry_to_json(const IsometrySpec& s) {
  Json j{{"kind", s.kind}};
  if (s.kind == "permutation") {
    j["max_displacement"] = s.max_displacement;
  } else if (s.kind == "perturbed_permutation") {
    j["max_displacement"] = s.max_displacement;
    j["theta"] = s.theta;
    j["h_band_radius"] = s.h_band_radius;
  } else if (s.kind == "embedding_map") {
    j["map"] = s.map;
  } else if (s.kind == "explicit_file") {
    j["file"] = s.file;
  }
  return j;
}

PipelineConfig parse_config(const Json& j) {
  const std::string ctx = "pipeline";
  reject_unknown_keys(j,
                      {"delta", "eta", "eps", "depth", "require_bijection",
                       "isometry_tol"},
                      ctx);
  PipelineConfig c;
  if (j.contains("delta")) c.delta = get_double(j, "delta", ctx);
  if (j.contains("eta")) c.eta = get_double(j, "eta", ctx);
  if (j.contains("eps")) c.eps = get_double(j, "eps", ctx);
  if (j.contains("depth")) c.depth = static_cast<int>(get_int(j, "depth", ctx));
  if (j.contains("require_bijection")) {
    if (!j["require_bijection"].is_boolean())
      throw std::invalid_argument(ctx + ": \"require_bijection\" must be boolean");
    c.require_bijection = j["require_bijection"].get<bool>();
  }
  if (j.contains("isometry_tol")) c.isometry_tol = get_double(j, "isometry_tol", ctx);
  return c;
}

Json config_to_json(const PipelineConfig& c) {
  Json j{{"delta", c.delta},
         {"eps", c.eps},
         {"depth", c.depth},
         {"require_bijection", c.require_bijection},
         {"isometry_tol", c.isometry_tol}};
  if (c.eta) j["eta"] = *c.eta;
  return j;
}

ProbeSpec parse_probes(const Json& j) {
  const std::string ctx = "probes";
  reject_unknown_keys(j, {"onl", "ghost"}, ctx);
  ProbeSpec p;
  if (j.contains("onl")) {
    const Json& o = j["onl"];
    reject_unknown_keys(o, {"entourage_level", "m", "num_samples"}, "probes.onl");
    OnlProbeSpec spec;
    spec.entourage_level =
        static_cast<int>(get_int(o, "entourage_level", "probes.onl"));
    spec.m = static_cast<int>(get_int(o, "m", "probes.onl"));
    if (o.contains("num_samples"))
      spec.num_samples = static_cast<int>(get_int(o, "num_samples", "probes.onl"));
    p.onl = spec;
  }
  if (j.contains("ghost")) {
    const Json& g = j["ghost"];
    reject_unknown_keys(g, {"steps"}, "probes.ghost");
    p.ghost_steps = g.contains("steps")
                        ? static_cast<int>(get_int(g, "steps", "probes.ghost"))
                        : 8;
    if (*p.ghost_steps <= 0)
      throw std::invalid_argument("probes.ghost: steps must be positive");
  }
  return p;
}

Json probes_to_json(const ProbeSpec& p) {
  Json j = Json::object();
  if (p.onl) {
    j["onl"] = Json{{"entourage_level", p.onl->entourage_level},
                    {"m", p.onl->m},
                    {"num_samples", p.onl->num_samples}};
  }
  if (p.ghost_steps) j["ghost"] = Json{{"steps", *p.ghost_steps}};
  return j;
}

ChecksSpec parse_checks(const Json& j) {
  const std::string ctx = "checks";
  reject_unknown_keys(j,
                      {"pipeline_success", "closeness_gf_max", "closeness_fg_max",
                       "forward_slack_max", "forward_slack_depth",
                       "h_matches_truth", "f_matches_truth",
                       "locators_contain_truth", "closeness_h_truth_max",
                       "onl_positive", "max_locator_size"},
                      ctx);
  ChecksSpec c;
  auto get_bool = [&](const char* key) {
    if (!j[key].is_boolean())
      throw std::invalid_argument(ctx + ": \"" + key + "\" must be boolean");
    return j[key].get<bool>();
  };
  if (j.contains("pipeline_success")) c.pipeline_success = get_bool("pipeline_success");
  if (j.contains("closeness_gf_max"))
    c.closeness_gf_max = static_cast<int>(get_int(j, "closeness_gf_max", ctx));
  if (j.contains("closeness_fg_max"))
    c.closeness_fg_max = static_cast<int>(get_int(j, "closeness_fg_max", ctx));
  if (j.contains("forward_slack_max"))
    c.forward_slack_max = static_cast<int>(get_int(j, "forward_slack_max", ctx));
  if (j.contains("forward_slack_depth"))
    c.forward_slack_depth = static_cast<int>(get_int(j, "forward_slack_depth", ctx));
  if (j.contains("h_matches_truth")) c.h_matches_truth = get_bool("h_matches_truth");
  if (j.contains("f_matches_truth")) c.f_matches_truth = get_bool("f_matches_truth");
  if (j.contains("locators_contain_truth"))
    c.locators_contain_truth = get_bool("locators_contain_truth");
  if (j.contains("closeness_h_truth_max"))
    c.closeness_h_truth_max =
        static_cast<int>(get_int(j, "closeness_h_truth_max", ctx));
  if (j.contains("onl_positive")) c.onl_positive = get_bool("onl_positive");
  if (j.contains("max_locator_size"))
    c.max_locator_size = static_cast<int>(get_int(j, "max_locator_size", ctx));
  return c;
}

Json checks_to_json(const ChecksSpec& c) {
  Json j = Json::object();
  if (c.pipeline_success) j["pipeline_success"] = *c.pipeline_success;
  if (c.closeness_gf_max) j["closeness_gf_max"] = *c.closeness_gf_max;
  if (c.closeness_fg_max) j["closeness_fg_max"] = *c.closeness_fg_max;
  if (c.forward_slack_max) {
    j["forward_slack_max"] = *c.forward_slack_max;
    if (c.forward_slack_depth >= 0) j["forward_slack_depth"] = c.forward_slack_depth;
  }
  if (c.h_matches_truth) j["h_matches_truth"] = *c.h_matches_truth;
  if (c.f_matches_truth) j["f_matches_truth"] = *c.f_matches_truth;
  if (c.locators_contain_truth)
    j["locators_contain_truth"] = *c.locators_contain_truth;
  if (c.closeness_h_truth_max) j["closeness_h_truth_max"] = *c.closeness_h_truth_max;
  if (c.onl_positive) j["onl_positive"] = *c.onl_positive;
  if (c.max_locator_size) j["max_locator_size"] = *c.max_locator_size;
  return j;
}

const char* status_name(StageStatus s) {
  switch (s) {
    case StageStatus::ok:
      return "ok";
    case StageStatus::failed:
      return "failed";
    case StageStatus::skipped:
      return "skipped";
  }
  return "unknown";
}

Json certificate_or_null(const MembershipCertificate& c) {
  return certificate_to_json(c);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Scenario parse_scenario(const Json& j, const fs::path& dir) {
  const std::string ctx = "scenario";
  reject_unknown_keys(j,
                      {"version", "name", "seed", "space_x", "space_y", "isometry",
                       "pipeline", "probes", "checks"},
                      ctx);
  Scenario sc;
  sc.dir = dir;
  sc.version = static_cast<int>(get_int(j, "version", ctx));
  if (sc.version != 1)
    throw std::invalid_argument("scenario: unsupported version " +
                                std::to_string(sc.version));
  sc.name = get_string(j, "name", ctx);
  if (!j.contains("seed") || !j["seed"].is_number_unsigned())
    throw std::invalid_argument(
        "scenario: field \"seed\" must be an unsigned integer");
  sc.seed = j["seed"].get<std::uint64_t>();
  if (!j.contains("space_x"))
    throw std::invalid_argument("scenario: missing field \"space_x\"");
  sc.space_x = parse_space(j["space_x"], "space_x");
  if (j.contains("space_y")) sc.space_y = parse_space(j["space_y"], "space_y");
  if (!j.contains("isometry"))
    throw std::invalid_argument("scenario: missing field \"isometry\"");
  sc.isometry = parse_isometry(j["isometry"], "isometry", dir);
  if (j.contains("pipeline")) sc.config = parse_config(j["pipeline"]);
  if (j.contains("probes")) sc.probes = parse_probes(j["probes"]);
  if (j.contains("checks")) sc.checks = parse_checks(j["checks"]);
  return sc;
}

Scenario load_scenario(const fs::path& file) {
  return parse_scenario(read_json_file(file), file.parent_path());
}

Json scenario_to_json(const Scenario& sc) {
  Json j{{"version", sc.version},
         {"name", sc.name},
         {"seed", sc.seed},
         {"space_x", space_to_json(sc.space_x)},
         {"isometry", isometry_to_json(sc.isometry)},
         {"pipeline", config_to_json(sc.config)}};
  if (sc.space_y) j["space_y"] = space_to_json(*sc.space_y);
  const Json probes = probes_to_json(sc.probes);
  if (!probes.empty()) j["probes"] = probes;
  const Json checks = checks_to_json(sc.checks);
  if (!checks.empty()) j["checks"] = checks;
  return j;
}

CoarseFiltration build_space(const SpaceSpec& spec) {
  auto finish = [](CoarseFiltration f) {
    maybe_load_level_cache(f);
    return f;
  };
  if (spec.kind == "interval_band") {
    if (spec.size <= 0)
      throw std::invalid_argument("interval_band: size must be positive");
    return finish(metric_filtration(
        Relation::band(GroundSet(spec.size), spec.radius), spec.max_level));
  }
  if (spec.kind == "metric_points") {
    return finish(metric_filtration(metric_entourage(spec.points, spec.point_radius),
                                    spec.max_level));
  }
  if (spec.kind == "group") {
    GroupTable table = spec.group_name == "cyclic"   ? GroupTable::cyclic(spec.group_n)
                       : spec.group_name == "dihedral" ? GroupTable::dihedral(spec.group_n)
                       : throw std::invalid_argument("group: unknown group \"" +
                                                     spec.group_name + "\"");
    return finish(group_filtration(table, spec.generating_set, spec.max_level));
  }
  if (spec.kind == "filter") {
    return finish(filter_filtration(Relation::band(GroundSet(spec.size), spec.radius),
                                    spec.base, spec.max_level));
  }
  if (spec.kind == "explicit") {
    return finish(
        explicit_filtration(relation_from_json(*spec.generator), spec.max_level));
  }
  if (spec.kind == "amplified") {
    return finish(amplify(build_space(*spec.inner), spec.copies));
  }
  throw std::invalid_argument("unknown space kind \"" + spec.kind + "\"");
}

namespace {

/// Shuffles within consecutive blocks of size d+1, so |sigma(x) - x| <= d.
IndexMap displacement_permutation(Index n, Index d, Rng& rng) {
  if (d < 0) throw std::invalid_argument("permutation: negative displacement bound");
  IndexMap sigma(n);
  for (Index start = 0; start < n; start += d + 1) {
    const Index len = std::min<Index>(d + 1, n - start);
    std::vector<Index> block(len);
    for (Index i = 0; i < len; ++i) block[i] = start + i;
    rng.shuffle(block);
    for (Index i = 0; i < len; ++i) sigma[start + i] = block[i];
  }
  return sigma;
}

Eigen::MatrixXcd permutation_dense(const IndexMap& sigma) {
  const Index n = static_cast<Index>(sigma.size());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (Index x = 0; x < n; ++x) p(sigma[x], x) = 1.0;
  return p;
}

/// exp(i theta H) P with H a seeded band Hermitian rescaled to norm 1.
Eigen::MatrixXcd perturbed_unitary(const IndexMap& sigma, double theta,
                                   Index band_radius, Rng& rng) {
  const Index n = static_cast<Index>(sigma.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < std::min<Index>(n, i + band_radius + 1); ++j) {
      if (i == j) {
        h(i, i) = rng.gaussian();
      } else {
        const Complex v = rng.complex_gaussian();
        h(i, j) = v;
        h(j, i) = std::conj(v);
      }
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd evals = es.eigenvalues();
  const double norm = std::max(std::abs(evals.minCoeff()), std::abs(evals.maxCoeff()));
  Eigen::VectorXcd phases(n);
  for (Index k = 0; k < n; ++k) {
    const double lambda = norm > 0 ? evals[k] / norm : 0.0;
    phases[k] = std::polar(1.0, theta * lambda);
  }
  const Eigen::MatrixXcd exp_ith =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return exp_ith * permutation_dense(sigma);
}

}  // namespace

GeneratedInputs generate_inputs(const Scenario& sc) {
  CoarseFiltration space_x = build_space(sc.space_x);
  CoarseFiltration space_y = sc.space_y ? build_space(*sc.space_y) : space_x;
  const Index nx = space_x.domain().size();
  const Index ny = space_y.domain().size();
  const IsometrySpec& iso = sc.isometry;

  if (iso.kind == "permutation" || iso.kind == "perturbed_permutation") {
    if (nx != ny)
      throw std::invalid_argument(
          "isometry: permutation needs equal space sizes, got " +
          std::to_string(nx) + " and " + std::to_string(ny));
    Rng perm_rng(sc.seed, kPermutationStream);
    IndexMap sigma = displacement_permutation(nx, iso.max_displacement, perm_rng);
    SparseOperator u(ny, nx);
    if (iso.kind == "permutation") {
      std::vector<std::tuple<Index, Index, Complex>> entries;
      entries.reserve(nx);
      for (Index x = 0; x < nx; ++x) entries.emplace_back(sigma[x], x, 1.0);
      u = SparseOperator(ny, nx, entries);
    } else {
      Rng band_rng(sc.seed, kHermitianStream);
      u = SparseOperator::from_dense(
          perturbed_unitary(sigma, iso.theta, iso.h_band_radius, band_rng));
    }
    return GeneratedInputs{std::move(space_x), std::move(space_y), std::move(u),
                           std::move(sigma)};
  }
  if (iso.kind == "embedding_map") {
    if (static_cast<Index>(iso.map.size()) != nx)
      throw std::invalid_argument("isometry: map length " +
                                  std::to_string(iso.map.size()) +
                                  " does not cover the source space");
    IsometryData data = embed_from_map(iso.map, space_x, space_y);
    return GeneratedInputs{std::move(space_x), std::move(space_y),
                           std::move(data.u), iso.map};
  }
  if (iso.kind == "explicit_file") {
    SparseOperator u = operator_from_json(read_json_file(sc.dir / iso.file));
    if (u.rows() != ny || u.cols() != nx)
      throw std::invalid_argument("isometry: file operator is " +
                                  std::to_string(u.rows()) + "x" +
                                  std::to_string(u.cols()) + ", spaces need " +
                                  std::to_string(ny) + "x" + std::to_string(nx));
    return GeneratedInputs{std::move(space_x), std::move(space_y), std::move(u), {}};
  }
  throw std::invalid_argument("unknown isometry kind \"" + iso.kind + "\"");
}

std::vector<fs::path> generate_to(const Scenario& sc, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  GeneratedInputs in = generate_inputs(sc);
  std::vector<fs::path> written;
  auto emit = [&](const char* name, const Json& j) {
    const fs::path p = out_dir / name;
    write_json_file(p, j);
    written.push_back(p);
  };
  emit("space_x.json", filtration_to_json(in.space_x));
  emit("space_y.json", filtration_to_json(in.space_y));
  emit("u.json", operator_to_json(in.u));
  if (in.truth) emit("truth.json", Json{{"map", *in.truth}});
  return written;
}

namespace {

Json stage_log_to_json(const std::vector<StageLogEntry>& log) {
  Json out = Json::array();
  for (const auto& e : log)
    out.push_back(Json{{"stage", e.stage},
                       {"status", status_name(e.status)},
                       {"detail", e.detail}});
  return out;
}

Json locators_to_json(const Locators& loc) {
  return Json{{"delta", loc.delta}, {"y_of", loc.y_of}, {"x_of", loc.x_of}};
}

Json concentration_to_json(const ConcentrationReport& r) {
  auto violations = [](const std::vector<TailViolation>& v) {
    Json out = Json::array();
    for (const auto& t : v)
      out.push_back(Json{{"point", t.point}, {"tail", t.tail}});
    return out;
  };
  return Json{{"eta", r.eta},
              {"eps", r.eps},
              {"pass", r.pass},
              {"column_violations", violations(r.column_violations)},
              {"row_violations", violations(r.row_violations)}};
}

Json map_to_json(const IndexMap& m) { return Json(m); }

Json onl_to_json(const ONLReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back(Json{{"norm", s.norm},
                           {"center", s.center},
                           {"ball_size", s.ball.size()},
                           {"ratio_by_level", s.ratio_by_level}});
  return Json{{"entourage_level", r.entourage_level},
              {"m", r.m},
              {"num_samples", r.num_samples},
              {"seed", r.seed},
              {"threshold", r.threshold},
              {"positive", r.positive},
              {"localization_level", r.localization_level},
              {"worst_ratio", r.worst_ratio},
              {"candidates_are_balls", r.candidates_are_balls},
              {"samples", std::move(samples)}};
}

struct CheckEvaluator {
  Json results = Json::object();
  bool all_pass = true;

  void record(const std::string& name, bool pass, Json expected, Json actual) {
    results[name] = Json{{"pass", pass},
                         {"expected", std::move(expected)},
                         {"actual", std::move(actual)}};
    all_pass = all_pass && pass;
  }
};

}  // namespace

RunOutcome run_scenario(const Scenario& sc, bool strict) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto ms_since = [](Clock::time_point from) {
    return std::chrono::duration<double, std::milli>(Clock::now() - from).count();
  };

  GeneratedInputs in = generate_inputs(sc);
  const double generate_ms = ms_since(t0);

  IsometryData iso{in.u, in.space_x, in.space_y, sc.config.isometry_tol};
  const auto t1 = Clock::now();
  PipelineResult pr = full_pipeline(iso, sc.config);
  const double pipeline_ms = ms_since(t1);

  Json report;
  report["artifact_version"] = kArtifactVersion;
  report["name"] = sc.name;
  report["seed"] = sc.seed;
  report["scenario"] = scenario_to_json(sc);
  report["stages"] = stage_log_to_json(pr.log);
  report["failed_stage"] = pr.failed_stage;
  report["isometry_defect"] = pr.isometry_defect;
  if (in.truth) report["truth"] = map_to_json(*in.truth);
  if (pr.locators) report["locators"] = locators_to_json(*pr.locators);
  if (pr.concentration)
    report["concentration"] = concentration_to_json(*pr.concentration);
  if (pr.recovery) {
    const MapRecovery& r = *pr.recovery;
    Json rec{{"ok", r.ok},
             {"g_total", r.g_total},
             {"f_injective", r.f_injective},
             {"g_injective", r.g_injective},
             {"empty_y_locators", r.empty_y_locators},
             {"empty_x_locators", r.empty_x_locators}};
    if (r.hall_witness_f) rec["hall_witness_f"] = *r.hall_witness_f;
    if (r.hall_witness_g) rec["hall_witness_g"] = *r.hall_witness_g;
    report["recovery"] = std::move(rec);
  }
  if (pr.equivalence) {
    const RecoveredEquivalence& eq = *pr.equivalence;
    Json maps{{"f", map_to_json(eq.f)}, {"g", map_to_json(eq.g)}};
    if (eq.h) maps["h"] = map_to_json(*eq.h);
    report["maps"] = std::move(maps);
    report["certificates"] =
        Json{{"distortion_f", distortion_to_json(eq.distortion_f)},
             {"distortion_g", distortion_to_json(eq.distortion_g)},
             {"closeness_gf", certificate_or_null(eq.closeness_gf)},
             {"closeness_fg", certificate_or_null(eq.closeness_fg)},
             {"entourage_union", certificate_or_null(eq.entourage_level)}};
  }

  const auto t2 = Clock::now();
  Json probes = Json::object();
  std::optional<ONLReport> onl_report;
  if (sc.probes.onl) {
    onl_report = onl_probe(in.space_x, sc.probes.onl->entourage_level,
                           sc.probes.onl->m, sc.probes.onl->num_samples, sc.seed);
    probes["onl"] = onl_to_json(*onl_report);
  }
  if (sc.probes.ghost_steps) {
    const Index ny = in.space_y.domain().size();
    const int steps = *sc.probes.ghost_steps;
    std::vector<std::vector<Index>> exhaustion;
    for (int m = 1; m <= steps; ++m) {
      const Index cut = static_cast<Index>(
          (static_cast<long long>(ny) * m + steps - 1) / steps);
      std::vector<Index> prefix(cut);
      for (Index i = 0; i < cut; ++i) prefix[i] = i;
      exhaustion.push_back(std::move(prefix));
    }
    GhostProfile gp = ghost_profile(in.u * in.u.adjoint(), exhaustion);
    Json sizes = Json::array();
    for (const auto& a : gp.exhaustion) sizes.push_back(a.size());
    probes["ghost"] =
        Json{{"steps", steps}, {"sizes", std::move(sizes)}, {"eps", gp.eps}};
  }
  if (!probes.empty()) report["probes"] = std::move(probes);
  const double probes_ms = ms_since(t2);

  CheckEvaluator ev;
  const ChecksSpec& ck = sc.checks;
  if (ck.pipeline_success)
    ev.record("pipeline_success", pr.success == *ck.pipeline_success,
              *ck.pipeline_success, pr.success);
  auto check_cert_level = [&](const char* name, const MembershipCertificate& cert,
                              int max_level) {
    const bool pass = cert.contained && cert.level <= max_level;
    ev.record(name, pass, max_level, cert.contained ? Json(cert.level) : Json());
  };
  if (ck.closeness_gf_max) {
    if (pr.equivalence)
      check_cert_level("closeness_gf_max", pr.equivalence->closeness_gf,
                       *ck.closeness_gf_max);
    else
      ev.record("closeness_gf_max", false, *ck.closeness_gf_max, Json());
  }
  if (ck.closeness_fg_max) {
    if (pr.equivalence)
      check_cert_level("closeness_fg_max", pr.equivalence->closeness_fg,
                       *ck.closeness_fg_max);
    else
      ev.record("closeness_fg_max", false, *ck.closeness_fg_max, Json());
  }
  if (ck.forward_slack_max) {
    bool pass = false;
    Json actual;
    if (pr.equivalence) {
      const auto& fwd = pr.equivalence->distortion_f.forward;
      int last = static_cast<int>(fwd.size()) - 1;
      if (ck.forward_slack_depth >= 0)
        last = std::min(last, ck.forward_slack_depth);
      pass = last >= 0;
      int worst = -1;
      for (int k = 0; k <= last; ++k) {
        if (!fwd[k].contained || fwd[k].level > k + *ck.forward_slack_max) {
          pass = false;
          break;
        }
        worst = std::max(worst, fwd[k].level - k);
      }
      if (pass) actual = worst;
    }
    ev.record("forward_slack_max", pass, *ck.forward_slack_max, actual);
  }
  if (ck.h_matches_truth) {
    const bool match = in.truth && pr.equivalence && pr.equivalence->h &&
                       *pr.equivalence->h == *in.truth;
    ev.record("h_matches_truth", match == *ck.h_matches_truth, *ck.h_matches_truth,
              match);
  }
  if (ck.f_matches_truth) {
    const bool match = in.truth && pr.equivalence && pr.equivalence->f == *in.truth;
    ev.record("f_matches_truth", match == *ck.f_matches_truth, *ck.f_matches_truth,
              match);
  }
  if (ck.locators_contain_truth) {
    bool contain = in.truth.has_value() && pr.locators.has_value();
    if (contain) {
      const auto& y_of = pr.locators->y_of;
      for (std::size_t x = 0; x < in.truth->size() && contain; ++x) {
        const Index y = (*in.truth)[x];
        if (y < 0) continue;
        contain = std::binary_search(y_of[x].begin(), y_of[x].end(), y);
      }
    }
    ev.record("locators_contain_truth", contain == *ck.locators_contain_truth,
              *ck.locators_contain_truth, contain);
  }
  if (ck.closeness_h_truth_max) {
    if (in.truth && pr.equivalence && pr.equivalence->h) {
      const MembershipCertificate cert =
          closeness_level(*pr.equivalence->h, *in.truth, in.space_y);
      check_cert_level("closeness_h_truth_max", cert, *ck.closeness_h_truth_max);
    } else {
      ev.record("closeness_h_truth_max", false, *ck.closeness_h_truth_max, Json());
    }
  }
  if (ck.onl_positive) {
    const bool positive = onl_report && onl_report->positive;
    ev.record("onl_positive", positive == *ck.onl_positive, *ck.onl_positive,
              positive);
  }
  if (ck.max_locator_size) {
    std::size_t largest = 0;
    if (pr.locators)
      for (const auto& s : pr.locators->y_of) largest = std::max(largest, s.size());
    ev.record("max_locator_size",
              pr.locators.has_value() &&
                  largest <= static_cast<std::size_t>(*ck.max_locator_size),
              *ck.max_locator_size, largest);
  }
  if (strict) {
    std::vector<std::string> skipped;
    for (const auto& e : pr.log)
      if (e.status == StageStatus::skipped) skipped.push_back(e.stage);
    if (!skipped.empty())
      ev.record("strict_no_skipped_stages", false, Json::array(), skipped);
    if (pr.recovery && !pr.recovery->g_total)
      ev.record("strict_maps_total", false, true, false);
  }
  report["checks"] = ev.results;

  int exit_code = 0;
  if (!pr.success)
    exit_code = 2;
  else if (!ev.all_pass)
    exit_code = 1;
  report["verdict"] = exit_code == 0   ? "pass"
                      : exit_code == 1 ? "check_failure"
                                       : "stage_failure";
  report["timing"] = Json{{"generate_ms", generate_ms},
                          {"pipeline_ms", pipeline_ms},
                          {"probes_ms", probes_ms},
                          {"total_ms", ms_since(t0)}};

  maybe_store_level_cache(in.space_x);
  maybe_store_level_cache(in.space_y);
  return RunOutcome{std::move(report), exit_code};
}

Json strip_timing(Json j) {
  if (j.is_object()) {
    j.erase("timing");
    for (auto& [key, value] : j.items()) value = strip_timing(std::move(value));
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_timing(std::move(value));
  }
  return j;
}

namespace {

void diff_walk(const Json& a, const Json& b, const std::string& path, Json& out) {
  if (a.type() != b.type()) {
    out.push_back(Json{{"path", path}, {"a", a}, {"b", b}});
    return;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      const std::string sub = path + "/" + it.key();
      if (!b.contains(it.key()))
        out.push_back(Json{{"path", sub}, {"a", it.value()}, {"b", Json()}});
      else
        diff_walk(it.value(), b[it.key()], sub, out);
    }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key()))
        out.push_back(
            Json{{"path", path + "/" + it.key()}, {"a", Json()}, {"b", it.value()}});
    return;
  }
  if (a.is_array()) {
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string sub = path + "/" + std::to_string(i);
      if (i >= a.size())
        out.push_back(Json{{"path", sub}, {"a", Json()}, {"b", b[i]}});
      else if (i >= b.size())
        out.push_back(Json{{"path", sub}, {"a", a[i]}, {"b", Json()}});
      else
        diff_walk(a[i], b[i], sub, out);
    }
    return;
  }
  if (a != b) out.push_back(Json{{"path", path}, {"a", a}, {"b", b}});
}

}  // namespace

Json report_diff(const Json& a, const Json& b) {
  for (const char* key : {"artifact_version", "stages", "verdict"}) {
    if (!a.is_object() || !a.contains(key))
      throw std::invalid_argument(std::string("report_diff: first document lacks \"") +
                                  key + "\"");
    if (!b.is_object() || !b.contains(key))
      throw std::invalid_argument(
          std::string("report_diff: second document lacks \"") + key + "\"");
  }
  Json out = Json::array();
  diff_walk(strip_timing(a), strip_timing(b), "", out);
  return out;
}

std::vector<fs::path> write_plot_data(const Json& report, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  auto emit = [&](const char* name, const std::string& content) {
    const fs::path p = out_dir / name;
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    written.push_back(p);
  };
  auto table_csv = [](const Json& d) {
    std::ostringstream csv;
    csv << "k,forward_level,backward_level\n";
    const auto& fwd = d["forward"];
    const auto& bwd = d["backward"];
    const std::size_t n = std::max(fwd.size(), bwd.size());
    for (std::size_t k = 0; k < n; ++k) {
      auto level = [](const Json& arr, std::size_t i) {
        if (i >= arr.size() || !arr[i]["contained"].get<bool>()) return -1;
        return arr[i]["level"].get<int>();
      };
      csv << k << "," << level(fwd, k) << "," << level(bwd, k) << "\n";
    }
    return csv.str();
  };
  if (report.contains("certificates")) {
    emit("distortion_f.csv", table_csv(report["certificates"]["distortion_f"]));
    emit("distortion_g.csv", table_csv(report["certificates"]["distortion_g"]));
  }
  if (report.contains("probes") && report["probes"].contains("ghost")) {
    const Json& g = report["probes"]["ghost"];
    std::ostringstream csv;
    csv << "m,size,eps\n";
    for (std::size_t m = 0; m < g["eps"].size(); ++m)
      csv << m << "," << g["sizes"][m].get<std::size_t>() << ","
          << g["eps"][m].get<double>() << "\n";
    emit("ghost.csv", csv.str());
  }
  if (report.contains("probes") && report["probes"].contains("onl")) {
    const Json& o = report["probes"]["onl"];
    std::ostringstream csv;
    csv << "level,min_ratio\n";
    std::vector<double> min_ratio;
    for (const auto& s : o["samples"]) {
      const auto& ratios = s["ratio_by_level"];
      if (min_ratio.size() < ratios.size()) min_ratio.resize(ratios.size(), 2.0);
      for (std::size_t k = 0; k < ratios.size(); ++k)
        min_ratio[k] = std::min(min_ratio[k], ratios[k].get<double>());
    }
    for (std::size_t k = 0; k < min_ratio.size(); ++k)
      csv << k << "," << min_ratio[k] << "\n";
    emit("onl.csv", csv.str());
  }
  return written;
}

namespace {

std::optional<fs::path> cache_dir() {
  const char* env = std::getenv("COARSE_RIGIDITY_CACHE");
  if (!env || !*env) return {};
  return fs::path(env);
}

fs::path cache_file(const fs::path& dir, const Json& identity) {
  std::ostringstream name;
  name << std::hex << fnv1a(identity.dump()) << ".json";
  return dir / name.str();
}

}  // namespace

void maybe_load_level_cache(CoarseFiltration& f) {
  const auto dir = cache_dir();
  if (!dir) return;
  const Json identity = filtration_to_json(f);
  const fs::path file = cache_file(*dir, identity);
  if (!fs::exists(file)) return;
  try {
    const Json j = read_json_file(file);
    if (j.at("filtration") != identity) return;  // key collision, recompute
    std::vector<Relation> levels;
    for (const auto& lv : j.at("levels")) levels.push_back(relation_from_json(lv));
    f.preload_levels(levels);
  } catch (const std::exception&) {
    // best effort: corrupt or foreign cache entries are ignored
  }
}

void maybe_store_level_cache(const CoarseFiltration& f) {
  const auto dir = cache_dir();
  if (!dir) return;
  const std::vector<Relation> levels = f.cached_levels();
  if (levels.size() < 2) return;  // nothing worth persisting
  const Json identity = filtration_to_json(f);
  Json j{{"filtration", identity}, {"levels", Json::array()}};
  for (const auto& lv : levels) j["levels"].push_back(relation_to_json(lv));
  std::error_code ec;
  fs::create_directories(*dir, ec);
  if (ec) return;
  try {
    write_json_file(cache_file(*dir, identity), j);
  } catch (const std::exception&) {
    // cache writes must not fail a run
  }
}

}  // namespace coarse
