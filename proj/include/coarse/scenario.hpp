#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarse/ghost.hpp"
#include "coarse/json_io.hpp"
#include "coarse/onl.hpp"
#include "coarse/recovery.hpp"

namespace coarse {

extern const char* kArtifactVersion;

/// One coarse space in a scenario file. kind selects which of the
/// remaining fields are meaningful; parsing rejects fields that do not
/// belong to the declared kind.
struct SpaceSpec {
  std::string kind;  // interval_band | metric_points | group | filter |
                     // explicit | amplified
  int max_level = CoarseFiltration::kDefaultMaxLevel;
  Index size = 0;                          // interval_band, filter
  Index radius = 1;                        // interval_band, filter
  std::vector<std::vector<long long>> points;  // metric_points
  long long point_radius = 1;                  // metric_points
  std::string group_name;                  // cyclic | dihedral
  Index group_n = 0;
  std::vector<Index> generating_set;
  std::vector<std::vector<Index>> base;    // filter
  std::optional<Json> generator;           // explicit, relation wire format
  std::shared_ptr<SpaceSpec> inner;        // amplified
  Index copies = 1;                        // amplified
};

struct IsometrySpec {
  std::string kind;  // permutation | perturbed_permutation | embedding_map |
                     // explicit_file
  Index max_displacement = 5;      // permutation, perturbed_permutation
  double theta = 0.1;              // perturbed_permutation
  Index h_band_radius = 1;         // perturbed_permutation
  std::vector<Index> map;          // embedding_map
  std::string file;                // explicit_file, relative to the scenario
};

struct OnlProbeSpec {
  int entourage_level = 1;
  int m = 4;
  int num_samples = 3;
};

struct ProbeSpec {
  std::optional<OnlProbeSpec> onl;       // probes the source space
  std::optional<int> ghost_steps;        // prefix exhaustion of u u*
};

/// Pass/fail conditions evaluated against the finished report. Absent
/// fields are not checked.
struct ChecksSpec {
  std::optional<bool> pipeline_success;
  std::optional<int> closeness_gf_max;
  std::optional<int> closeness_fg_max;
  std::optional<int> forward_slack_max;  // forward level k' <= k + slack
  int forward_slack_depth = -1;          // ... for k up to this, -1 = table
  std::optional<bool> h_matches_truth;
  std::optional<bool> f_matches_truth;
  std::optional<bool> locators_contain_truth;
  std::optional<int> closeness_h_truth_max;
  std::optional<bool> onl_positive;
  std::optional<int> max_locator_size;
};

struct Scenario {
  int version = 1;
  std::string name;
  std::uint64_t seed = 0;
  SpaceSpec space_x;
  std::optional<SpaceSpec> space_y;  // defaults to space_x
  IsometrySpec isometry;
  PipelineConfig config;
  ProbeSpec probes;
  ChecksSpec checks;
  std::filesystem::path dir;  // directory scenario-relative paths resolve in
};

/// Strict parse: required "version", unknown fields rejected everywhere,
/// referenced files must exist. Throws std::invalid_argument with the
/// offending field named.
Scenario parse_scenario(const Json& j, const std::filesystem::path& dir);
Scenario load_scenario(const std::filesystem::path& file);
Json scenario_to_json(const Scenario& sc);

CoarseFiltration build_space(const SpaceSpec& spec);

struct GeneratedInputs {
  CoarseFiltration space_x;
  CoarseFiltration space_y;
  SparseOperator u;
  std::optional<IndexMap> truth;  // generating map when the scenario knows it
};

/// Deterministic in the scenario seed: equal scenarios produce equal
/// inputs, byte for byte.
GeneratedInputs generate_inputs(const Scenario& sc);

/// Writes space_x.json, space_y.json, u.json and, when ground truth
/// exists, truth.json under out_dir. Returns the written paths.
std::vector<std::filesystem::path> generate_to(const Scenario& sc,
                                               const std::filesystem::path& out_dir);

struct RunOutcome {
  Json report;
  int exit_code = 0;  // 0 pass, 1 check failure, 2 pipeline-stage failure
};

/// Executes the pipeline and configured probes, evaluates checks, and
/// assembles the report. strict escalates skipped stages and partial maps
/// to check failures.
RunOutcome run_scenario(const Scenario& sc, bool strict = false);

/// Report minus every "timing" subtree; the byte-comparable part.
Json strip_timing(Json j);

/// Field-level diff as an array of {path, a, b}, ignoring timing. Throws
/// std::invalid_argument when either document lacks the report schema's
/// required keys.
Json report_diff(const Json& a, const Json& b);

/// CSV emission of distortion tables and the ghost profile from a report.
std::vector<std::filesystem::path> write_plot_data(const Json& report,
                                                   const std::filesystem::path& out_dir);

/// Level-cache persistence in the directory named by COARSE_RIGIDITY_CACHE.
/// Loading is best effort: a missing, foreign, or invalid cache file is
/// ignored and levels are recomputed.
void maybe_load_level_cache(CoarseFiltration& f);
void maybe_store_level_cache(const CoarseFiltration& f);

}  // namespace coarse
