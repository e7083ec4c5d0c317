#include "cornbn/constraints.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

KnowledgeConstraints::KnowledgeConstraints(std::set<NamedEdge> forbidden,
                                           std::set<NamedEdge> forced,
                                           std::map<std::string, int> tiers)
    : forbidden_(std::move(forbidden)), forced_(std::move(forced)), tiers_(std::move(tiers)) {
  for (const auto& [name, tier] : tiers_) {
    if (tier < 0) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("tier of '{}' is negative", name));
    }
  }
  std::vector<std::string> names;
  for (const auto& e : forced_) {
    if (forbidden_.count(e)) {
      throw Error(ErrorKind::InfeasibleConstraints,
                  fmt::format("edge {} -> {} is both forced and forbidden", e.first, e.second));
    }
    if (e.first == e.second) {
      throw Error(ErrorKind::InfeasibleConstraints, fmt::format("forced self-loop on '{}'", e.first));
    }
    auto pt = tiers_.find(e.first);
    auto ct = tiers_.find(e.second);
    if (pt != tiers_.end() && ct != tiers_.end() && pt->second > ct->second) {
      throw Error(ErrorKind::InfeasibleConstraints,
                  fmt::format("forced edge {} -> {} runs from tier {} back to tier {}", e.first,
                              e.second, pt->second, ct->second));
    }
    names.push_back(e.first);
    names.push_back(e.second);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  Dag forced_graph(names);
  for (const auto& [p, c] : forced_) {
    if (forced_graph.creates_cycle(forced_graph.index_of(p), forced_graph.index_of(c))) {
      throw Error(ErrorKind::InfeasibleConstraints,
                  fmt::format("forced edge {} -> {} closes a cycle", p, c));
    }
    forced_graph = forced_graph.add_edge(p, c);
  }
}

int KnowledgeConstraints::tier_of(const std::string& name, const VariableCatalog& catalog) const {
  auto it = tiers_.find(name);
  if (it != tiers_.end()) return it->second;
  return catalog.at(name).tier;
}

bool KnowledgeConstraints::allows(const std::string& parent, const std::string& child,
                                  const VariableCatalog& catalog) const {
  if (parent == child) return false;
  if (forbidden_.count({parent, child})) return false;
  return tier_of(parent, catalog) <= tier_of(child, catalog);
}

void KnowledgeConstraints::check_names(const VariableCatalog& catalog) const {
  auto check = [&](const std::string& n) {
    if (!catalog.contains(n)) {
      throw Error(ErrorKind::UnknownVariable, fmt::format("constraint names unknown variable '{}'", n));
    }
  };
  for (const auto& [a, b] : forbidden_) { check(a); check(b); }
  for (const auto& [a, b] : forced_) { check(a); check(b); }
  for (const auto& [n, t] : tiers_) check(n);
}

namespace {

std::set<NamedEdge> read_edges(const nlohmann::json& j, const char* key) {
  std::set<NamedEdge> out;
  if (!j.contains(key)) return out;
  for (const auto& e : j.at(key)) {
    if (!e.is_array() || e.size() != 2) {
      throw Error(ErrorKind::SchemaError, fmt::format("'{}' entries must be [from, to] pairs", key));
    }
    out.emplace(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return out;
}

}  // namespace

KnowledgeConstraints KnowledgeConstraints::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SchemaError, "constraint file must hold a JSON object");
  std::map<std::string, int> tiers;
  if (j.contains("tiers")) {
    for (const auto& [name, t] : j.at("tiers").items()) tiers[name] = t.get<int>();
  }
  return KnowledgeConstraints(read_edges(j, "forbidden"), read_edges(j, "forced"), std::move(tiers));
}

KnowledgeConstraints KnowledgeConstraints::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, fmt::format("{}: {}", path.string(), e.what()));
  }
  return from_json(j);
}

nlohmann::json KnowledgeConstraints::to_json() const {
  nlohmann::json j;
  j["forbidden"] = nlohmann::json::array();
  for (const auto& [a, b] : forbidden_) j["forbidden"].push_back({a, b});
  j["forced"] = nlohmann::json::array();
  for (const auto& [a, b] : forced_) j["forced"].push_back({a, b});
  j["tiers"] = tiers_;
  return j;
}

std::vector<Violation> constraints_check(const Dag& dag, const KnowledgeConstraints& kc,
                                         const VariableCatalog& catalog) {
  kc.check_names(catalog);
  for (const auto& n : dag.nodes()) {
    if (!catalog.contains(n)) {
      throw Error(ErrorKind::UnknownVariable, fmt::format("graph node '{}' not in catalog", n));
    }
  }
  std::vector<Violation> out;
  for (auto [p, c] : dag.edges()) {
    const auto& pn = dag.name(p);
    const auto& cn = dag.name(c);
    if (kc.forbidden().count({pn, cn})) out.push_back({ViolationKind::ForbiddenEdge, pn, cn});
    if (kc.tier_of(pn, catalog) > kc.tier_of(cn, catalog)) {
      out.push_back({ViolationKind::TierViolation, pn, cn});
    }
  }
  for (const auto& [pn, cn] : kc.forced()) {
    const bool present = dag.index_of(pn) >= 0 && dag.has_edge(pn, cn);
    if (!present) out.push_back({ViolationKind::MissingForcedEdge, pn, cn});
  }
  return out;
}

}  // namespace cornbn
