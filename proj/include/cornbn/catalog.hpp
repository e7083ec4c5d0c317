#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cornbn/bin_scheme.hpp"

namespace cornbn {

enum class VariableKind { Raw, Derived, Target };

std::string_view to_string(VariableKind kind);
VariableKind parse_variable_kind(std::string_view text);

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::Raw;
  int tier = 0;
  BinScheme bins;
};

/// Ordered set of model variables. Position in the catalog is the variable's
/// index everywhere else (dataset columns, DAG nodes, factor scopes).
class VariableCatalog {
 public:
  VariableCatalog() = default;
  explicit VariableCatalog(std::vector<VariableSpec> variables);

  int size() const { return static_cast<int>(variables_.size()); }
  const VariableSpec& operator[](int index) const { return variables_.at(index); }
  const VariableSpec& at(std::string_view name) const { return variables_[index_of(name)]; }
  const std::vector<VariableSpec>& variables() const { return variables_; }

  int index_of(std::string_view name) const;
  bool contains(std::string_view name) const;
  int target_index() const { return target_; }
  const VariableSpec& target() const { return variables_[target_]; }
  std::vector<std::string> names() const;
  std::vector<int> cardinalities() const;

  VariableCatalog with_bins(int index, BinScheme bins) const;

 private:
  std::vector<VariableSpec> variables_;
  std::unordered_map<std::string, int> index_;
  int target_ = -1;
};

// Default temporal tiers for the agronomic variable naming scheme:
// soil rating 0, drought index 1, May..September 2..6, the target 7.
int default_tier(std::string_view name, bool is_target);

}  // namespace cornbn
