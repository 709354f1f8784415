#include "coarse/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace coarse {

namespace {

const char* kind_name(FiltrationKind k) {
  switch (k) {
    case FiltrationKind::metric:
      return "metric";
    case FiltrationKind::group:
      return "group";
    case FiltrationKind::filter_restricted:
      return "filter";
    case FiltrationKind::explicit_kind:
      return "explicit";
    case FiltrationKind::amplified:
      return "amplified";
    case FiltrationKind::operator_induced:
      return "operator";
  }
  throw std::logic_error("unhandled filtration kind");
}

FiltrationKind kind_from_name(const std::string& s) {
  if (s == "metric") return FiltrationKind::metric;
  if (s == "group") return FiltrationKind::group;
  if (s == "filter") return FiltrationKind::filter_restricted;
  if (s == "explicit") return FiltrationKind::explicit_kind;
  if (s == "amplified") return FiltrationKind::amplified;
  if (s == "operator") return FiltrationKind::operator_induced;
  throw std::invalid_argument("unknown filtration kind \"" + s + "\"");
}

void require_key(const Json& j, const char* key, const std::string& context) {
  if (!j.contains(key)) {
    throw std::invalid_argument(context + ": missing key \"" + key + "\"");
  }
}

}  // namespace

void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed,
                         const std::string& context) {
  if (!j.is_object()) {
    throw std::invalid_argument(context + ": expected a JSON object");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(context + ": unknown key \"" + it.key() +
                                  "\"");
    }
  }
}

Json relation_to_json(const Relation& e) {
  Json pairs = Json::array();
  for (const auto& [a, b] : e.pairs()) {
    pairs.push_back(Json::array({a, b}));
  }
  return Json{{"size", e.domain().size()}, {"pairs", std::move(pairs)}};
}

Relation relation_from_json(const Json& j) {
  reject_unknown_keys(j, {"size", "pairs"}, "relation");
  require_key(j, "size", "relation");
  require_key(j, "pairs", "relation");
  if (!j["size"].is_number_integer()) {
    throw std::invalid_argument("relation: \"size\" must be an integer");
  }
  const Index n = j["size"].get<Index>();
  if (!j["pairs"].is_array()) {
    throw std::invalid_argument("relation: \"pairs\" must be an array");
  }
  std::vector<IndexPair> pairs;
  pairs.reserve(j["pairs"].size());
  for (const auto& p : j["pairs"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
        !p[1].is_number_integer()) {
      throw std::invalid_argument(
          "relation: each pair must be a two-element integer array");
    }
    pairs.emplace_back(p[0].get<Index>(), p[1].get<Index>());
  }
  return Relation(GroundSet(n), std::move(pairs));
}

Json filtration_to_json(const CoarseFiltration& f) {
  Json j{{"kind", kind_name(f.kind())},
         {"generator", relation_to_json(f.generator())},
         {"max_level", f.max_level()}};
  if (f.filter_base().has_value()) {
    Json base = Json::array();
    for (const auto& s : *f.filter_base()) base.push_back(s);
    j["base"] = std::move(base);
  }
  return j;
}

CoarseFiltration filtration_from_json(const Json& j) {
  reject_unknown_keys(j, {"kind", "generator", "max_level", "base"},
                      "filtration");
  require_key(j, "kind", "filtration");
  require_key(j, "generator", "filtration");
  require_key(j, "max_level", "filtration");
  const FiltrationKind kind = kind_from_name(j["kind"].get<std::string>());
  Relation generator = relation_from_json(j["generator"]);
  if (!j["max_level"].is_number_integer()) {
    throw std::invalid_argument("filtration: \"max_level\" must be an integer");
  }
  const int max_level = j["max_level"].get<int>();
  std::optional<std::vector<std::vector<Index>>> base;
  if (j.contains("base")) {
    base.emplace();
    for (const auto& set : j["base"]) {
      std::vector<Index> s;
      for (const auto& x : set) s.push_back(x.get<Index>());
      base->push_back(std::move(s));
    }
  }
  return CoarseFiltration(std::move(generator), kind, max_level,
                          std::move(base));
}

Json operator_to_json(const SparseOperator& a) {
  Json entries = Json::array();
  // entries_ is keyed (row, col), so iteration is already row-major
  for (const auto& [rc, v] : a.entries()) {
    entries.push_back(Json::array({rc.first, rc.second, v.real(), v.imag()}));
  }
  return Json{{"rows", a.rows()},
              {"cols", a.cols()},
              {"entries", std::move(entries)}};
}

SparseOperator operator_from_json(const Json& j) {
  reject_unknown_keys(j, {"rows", "cols", "entries"}, "operator");
  require_key(j, "rows", "operator");
  require_key(j, "cols", "operator");
  require_key(j, "entries", "operator");
  const Index rows = j["rows"].get<Index>();
  const Index cols = j["cols"].get<Index>();
  std::vector<std::tuple<Index, Index, Complex>> entries;
  entries.reserve(j["entries"].size());
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 4) {
      throw std::invalid_argument(
          "operator: each entry must be [row, col, re, im]");
    }
    entries.emplace_back(e[0].get<Index>(), e[1].get<Index>(),
                         Complex(e[2].get<double>(), e[3].get<double>()));
  }
  return SparseOperator(rows, cols, entries);
}

Json certificate_to_json(const MembershipCertificate& c) {
  Json j{{"contained", c.contained}, {"level", c.level}};
  if (c.witness_pair.has_value()) {
    j["witness_pair"] =
        Json::array({c.witness_pair->first, c.witness_pair->second});
  }
  if (c.splitting_set.has_value()) {
    Json s = Json::array();
    for (Index x : *c.splitting_set) s.push_back(x);
    j["splitting_set"] = std::move(s);
  }
  if (c.base_index.has_value()) j["base_index"] = *c.base_index;
  return j;
}

Json distortion_to_json(const DistortionReport& d) {
  Json fwd = Json::array();
  for (const auto& c : d.forward) fwd.push_back(certificate_to_json(c));
  Json bwd = Json::array();
  for (const auto& c : d.backward) bwd.push_back(certificate_to_json(c));
  return Json{{"forward", std::move(fwd)}, {"backward", std::move(bwd)}};
}

}  // namespace coarse
