#include "cornbn/evidence.hpp"

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

EvidenceSet::EvidenceSet(const VariableCatalog& catalog, std::map<std::string, int> assignments)
    : assignments_(std::move(assignments)) {
  for (const auto& [name, bin] : assignments_) {
    const auto& spec = catalog.at(name);
    if (bin < 0 || bin >= spec.bins.bin_count()) {
      throw Error(ErrorKind::BinOutOfRange,
                  fmt::format("bin {} invalid for '{}' ({} bins)", bin, name, spec.bins.bin_count()));
    }
  }
}

EvidenceSet EvidenceSet::with(const VariableCatalog& catalog, const std::string& name,
                              int bin) const {
  auto copy = assignments_;
  copy[name] = bin;
  return EvidenceSet(catalog, std::move(copy));
}

bool EvidenceSet::is_superset_of(const EvidenceSet& other) const {
  for (const auto& [name, bin] : other.assignments_) {
    auto it = assignments_.find(name);
    if (it == assignments_.end() || it->second != bin) return false;
  }
  return true;
}

}  // namespace cornbn
