#include "cornbn/catalog.hpp"

#include <array>

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

std::string_view to_string(VariableKind kind) {
  switch (kind) {
    case VariableKind::Raw: return "raw";
    case VariableKind::Derived: return "derived";
    case VariableKind::Target: return "target";
  }
  return "raw";
}

VariableKind parse_variable_kind(std::string_view text) {
  if (text == "raw") return VariableKind::Raw;
  if (text == "derived") return VariableKind::Derived;
  if (text == "target") return VariableKind::Target;
  throw Error(ErrorKind::SchemaError, fmt::format("unknown variable kind '{}'", text));
}

VariableCatalog::VariableCatalog(std::vector<VariableSpec> variables)
    : variables_(std::move(variables)) {
  for (int i = 0; i < size(); ++i) {
    const auto& v = variables_[i];
    if (v.name.empty()) throw Error(ErrorKind::InvalidArgument, "variable name is empty");
    if (v.tier < 0) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("variable '{}' has negative tier", v.name));
    }
    if (!index_.emplace(v.name, i).second) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("duplicate variable '{}'", v.name));
    }
    if (v.kind == VariableKind::Target) {
      if (target_ >= 0) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("second target variable '{}'", v.name));
      }
      target_ = i;
    }
  }
  if (target_ < 0) throw Error(ErrorKind::InvalidArgument, "catalog has no target variable");
}

int VariableCatalog::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw Error(ErrorKind::UnknownVariable, fmt::format("unknown variable '{}'", name));
  }
  return it->second;
}

bool VariableCatalog::contains(std::string_view name) const {
  return index_.count(std::string(name)) > 0;
}

std::vector<std::string> VariableCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

std::vector<int> VariableCatalog::cardinalities() const {
  std::vector<int> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.bins.bin_count());
  return out;
}

VariableCatalog VariableCatalog::with_bins(int index, BinScheme bins) const {
  auto copy = variables_;
  copy.at(index).bins = std::move(bins);
  return VariableCatalog(std::move(copy));
}

int default_tier(std::string_view name, bool is_target) {
  if (is_target) return 7;
  static constexpr std::array<std::string_view, 5> months = {"May", "Jun", "Jul", "Aug", "Sep"};
  for (std::size_t m = 0; m < months.size(); ++m) {
    const auto& suffix = months[m];
    if (name.size() > suffix.size() &&
        name.substr(name.size() - suffix.size()) == suffix &&
        name[name.size() - suffix.size() - 1] == '_') {
      return 2 + static_cast<int>(m);
    }
  }
  if (name.find("DI") == 0 || name.find("PDSI") != std::string_view::npos) return 1;
  return 0;
}

}  // namespace cornbn
