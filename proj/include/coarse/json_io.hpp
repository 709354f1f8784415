#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "coarse/filtration.hpp"
#include "coarse/recovery.hpp"

namespace coarse {

using Json = nlohmann::json;

/// Wire format {"size": N, "pairs": [[a, b], ...]} with pairs sorted
/// lexicographically; parsing rejects unknown keys.
Json relation_to_json(const Relation& e);
Relation relation_from_json(const Json& j);

/// Wire format {"kind": ..., "generator": relation, "max_level": K} plus
/// "base" for filter-restricted structures.
Json filtration_to_json(const CoarseFiltration& f);
CoarseFiltration filtration_from_json(const Json& j);

/// Wire format {"rows": N, "cols": M, "entries": [[y, x, re, im], ...]}
/// with entries sorted row-major, so serialization round-trips
/// bit-exactly.
Json operator_to_json(const SparseOperator& a);
SparseOperator operator_from_json(const Json& j);

Json certificate_to_json(const MembershipCertificate& c);
Json distortion_to_json(const DistortionReport& d);

/// Throws std::invalid_argument when j holds a key outside allowed.
void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed,
                         const std::string& context);

}  // namespace coarse
