#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarse/locators.hpp"

namespace coarse {

/// Maps are index vectors over their domain; -1 marks an undefined point,
/// so partially recovered maps stay representable.
using IndexMap = std::vector<Index>;

IndexMap identity_map(Index n);
bool map_total(const IndexMap& m);
bool map_injective(const IndexMap& m);

/// Level tables of a map against the two filtrations. forward[k] locates
/// the image of level k of the source inside the target filtration;
/// backward[k] locates the preimage of level k of the target inside the
/// source. Undefined points are skipped, so the tables of a partial map
/// certify its restriction.
struct DistortionReport {
  std::vector<MembershipCertificate> forward;
  std::vector<MembershipCertificate> backward;
};

DistortionReport verify_coarse_expanding(const IndexMap& map,
                                         const CoarseFiltration& source,
                                         const CoarseFiltration& target, int depth);

/// Membership level of {(m1(x), m2(x))} in the codomain filtration; the
/// closeness certificate for two maps with common domain and codomain.
/// Points where either map is undefined are skipped.
MembershipCertificate closeness_level(const IndexMap& map1, const IndexMap& map2,
                                      const CoarseFiltration& codomain);

/// Bijection from injections f: X -> Y and g: Y -> X by chain chasing:
/// chains entered from X \ g(Y) follow f, chains entered from Y \ f(X)
/// follow g^{-1}, and cyclic chains follow f. On finite total inputs the
/// sizes must agree and every chain is a cycle, so the origin branches
/// guard the contract rather than the common path.
IndexMap cantor_bernstein(const IndexMap& f, const IndexMap& g);

struct MapRecovery {
  bool ok = false;           // f recovered; g may still be partial
  IndexMap f, g;
  bool g_total = false;
  bool f_injective = false, g_injective = false;
  std::vector<Index> empty_y_locators;  // x with no locator, fatal
  std::vector<Index> empty_x_locators;  // y with no locator, leaves g partial
  std::optional<std::vector<Index>> hall_witness_f, hall_witness_g;
};

/// Reads maps off the locator sets. Without require_injective each point
/// takes its smallest locator; with it, a system of distinct
/// representatives is selected, and a Hall deficiency witness is forwarded
/// on failure. Empty locator sets on the source side refuse recovery;
/// empty sets on the target side leave g partial.
MapRecovery recover_maps(const Locators& loc, bool require_injective);
MapRecovery recover_maps(const IsometryData& iso, double delta, bool require_injective);

struct RecoveredEquivalence {
  IndexMap f, g;
  std::optional<IndexMap> h;  // bijection, when both maps were total
  DistortionReport distortion_f, distortion_g;
  MembershipCertificate closeness_gf;   // g o f against id_X
  MembershipCertificate closeness_fg;   // f o g against id_Y
  MembershipCertificate entourage_level;  // locator union in the target
};

struct PipelineConfig {
  double delta = 0.5;
  std::optional<double> eta;  // defaults to delta
  double eps = 0.4;
  int depth = 20;             // certificate table depth
  bool require_bijection = true;
  double isometry_tol = 1e-10;
};

enum class StageStatus { ok, failed, skipped };

struct StageLogEntry {
  std::string stage;
  StageStatus status = StageStatus::ok;
  std::string detail;
};

struct PipelineResult {
  bool success = false;       // all mandatory stages completed
  std::string failed_stage;   // empty on success
  std::vector<StageLogEntry> log;
  double isometry_defect = 0;
  std::optional<Locators> locators;
  std::optional<ConcentrationReport> concentration;
  std::optional<MapRecovery> recovery;
  std::optional<RecoveredEquivalence> equivalence;
};

/// Stages: isometry check, locators, concentration, map recovery, optional
/// bijection, then certificates. Any stage failure stops the pipeline and
/// returns the partial result with the failure recorded; nothing falls
/// back silently.
PipelineResult full_pipeline(const IsometryData& iso, const PipelineConfig& config);

}  // namespace coarse
