#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "cornbn/catalog.hpp"
#include "cornbn/panel.hpp"

namespace cornbn {

inline constexpr int kMissing = -1;

/// Bin indices per county-year, one column per catalog variable (catalog
/// order). Missing cells hold kMissing.
class DiscretizedDataset {
 public:
  using Cells = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  DiscretizedDataset() = default;
  DiscretizedDataset(VariableCatalog catalog, std::vector<std::string> county_fips,
                     std::vector<int> years, Cells cells);
  // Rows without county/year labels (synthetic samples).
  DiscretizedDataset(VariableCatalog catalog, Cells cells);

  const VariableCatalog& catalog() const { return catalog_; }
  const Cells& cells() const { return cells_; }
  int rows() const { return static_cast<int>(cells_.rows()); }
  int cols() const { return static_cast<int>(cells_.cols()); }
  int at(int row, int var) const { return cells_(row, var); }
  const std::vector<std::string>& county_fips() const { return county_fips_; }
  const std::vector<int>& years() const { return years_; }

  bool has_missing() const;
  double missing_fraction(int var) const;
  double max_missing_fraction() const;

  DiscretizedDataset subset(const std::vector<int>& rows) const;

  std::string to_csv() const;
  nlohmann::ordered_json schemes_json() const;

 private:
  VariableCatalog catalog_;
  std::vector<std::string> county_fips_;
  std::vector<int> years_;
  Cells cells_;
};

/// Map panel values through the catalog's bin schemes. Catalog variables
/// absent from the panel become all-missing columns; row count is preserved.
DiscretizedDataset discretize_panel(const RawPanel& panel, const VariableCatalog& catalog);

struct CatalogOptions {
  std::string target = "Yield";
  int max_bins = 4;
  // Fixed interior edges per variable; the target defaults to the
  // four-class yield scheme 131/149/178 bu/ac.
  std::map<std::string, std::vector<double>> fixed_edges = {{"Yield", {131.0, 149.0, 178.0}}};
  std::map<std::string, int> tiers;  // overrides default_tier()
  std::set<std::string> derived;     // columns produced by a recipe
};

/// Learn a catalog from training rows: the target gets its fixed edges and
/// per-bin training means; every other column is discretized against the
/// target's bins.
VariableCatalog build_catalog(const RawPanel& train, const CatalogOptions& options);

nlohmann::ordered_json bin_scheme_to_json(const BinScheme& scheme);
BinScheme bin_scheme_from_json(const nlohmann::json& j);

}  // namespace cornbn
