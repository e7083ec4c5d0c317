#pragma once

#include <map>
#include <string>

#include "cornbn/catalog.hpp"

namespace cornbn {

/// Observed bin per variable, validated against a catalog at construction.
class EvidenceSet {
 public:
  EvidenceSet() = default;
  EvidenceSet(const VariableCatalog& catalog, std::map<std::string, int> assignments);

  const std::map<std::string, int>& assignments() const { return assignments_; }
  bool empty() const { return assignments_.empty(); }
  int size() const { return static_cast<int>(assignments_.size()); }
  bool contains(const std::string& name) const { return assignments_.count(name) > 0; }

  EvidenceSet with(const VariableCatalog& catalog, const std::string& name, int bin) const;
  bool is_superset_of(const EvidenceSet& other) const;

  friend bool operator==(const EvidenceSet&, const EvidenceSet&) = default;

 private:
  std::map<std::string, int> assignments_;
};

}  // namespace cornbn
