#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cornbn/catalog.hpp"
#include "cornbn/dag.hpp"

namespace cornbn {

using NamedEdge = std::pair<std::string, std::string>;

/// Expert background knowledge: forbidden edges, forced edges and temporal
/// tiers. Any edge from a higher tier into a strictly lower tier is
/// forbidden. Tiers given here override the catalog's tiers.
class KnowledgeConstraints {
 public:
  KnowledgeConstraints() = default;
  KnowledgeConstraints(std::set<NamedEdge> forbidden, std::set<NamedEdge> forced,
                       std::map<std::string, int> tiers = {});

  const std::set<NamedEdge>& forbidden() const { return forbidden_; }
  const std::set<NamedEdge>& forced() const { return forced_; }
  const std::map<std::string, int>& tiers() const { return tiers_; }

  int tier_of(const std::string& name, const VariableCatalog& catalog) const;
  // Not forbidden and not future->past. Self-loops are never allowed.
  bool allows(const std::string& parent, const std::string& child,
              const VariableCatalog& catalog) const;

  // Throws UnknownVariable for any name outside the catalog.
  void check_names(const VariableCatalog& catalog) const;

  static KnowledgeConstraints from_json(const nlohmann::json& j);
  static KnowledgeConstraints load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

 private:
  std::set<NamedEdge> forbidden_;
  std::set<NamedEdge> forced_;
  std::map<std::string, int> tiers_;
};

enum class ViolationKind { ForbiddenEdge, MissingForcedEdge, TierViolation };

struct Violation {
  ViolationKind kind;
  std::string from;
  std::string to;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every forbidden edge present, forced edge absent and tier-violating edge
/// present in `dag`. Empty iff the graph complies.
std::vector<Violation> constraints_check(const Dag& dag, const KnowledgeConstraints& kc,
                                         const VariableCatalog& catalog);

}  // namespace cornbn
