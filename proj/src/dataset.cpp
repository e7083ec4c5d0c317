#include "cornbn/dataset.hpp"

#include <fmt/format.h>

#include "cornbn/discretize.hpp"
#include "cornbn/errors.hpp"
#include "csv.hpp"

namespace cornbn {

DiscretizedDataset::DiscretizedDataset(VariableCatalog catalog, std::vector<std::string> county_fips,
                                       std::vector<int> years, Cells cells)
    : catalog_(std::move(catalog)),
      county_fips_(std::move(county_fips)),
      years_(std::move(years)),
      cells_(std::move(cells)) {
  if (cells_.cols() != catalog_.size()) {
    throw Error(ErrorKind::SchemaError, "dataset width differs from catalog size");
  }
  if (county_fips_.size() != static_cast<std::size_t>(cells_.rows()) ||
      years_.size() != static_cast<std::size_t>(cells_.rows())) {
    throw Error(ErrorKind::SchemaError, "dataset row labels differ from row count");
  }
  const auto cards = catalog_.cardinalities();
  for (Eigen::Index r = 0; r < cells_.rows(); ++r) {
    for (Eigen::Index c = 0; c < cells_.cols(); ++c) {
      const int b = cells_(r, c);
      if (b != kMissing && (b < 0 || b >= cards[c])) {
        throw Error(ErrorKind::BinOutOfRange,
                    fmt::format("row {} variable '{}': bin {} out of range", r, catalog_[c].name, b));
      }
    }
  }
}

DiscretizedDataset::DiscretizedDataset(VariableCatalog catalog, Cells cells) {
  const auto n = static_cast<std::size_t>(cells.rows());
  *this = DiscretizedDataset(std::move(catalog), std::vector<std::string>(n), std::vector<int>(n, 0),
                             std::move(cells));
}

bool DiscretizedDataset::has_missing() const { return (cells_.array() == kMissing).any(); }

double DiscretizedDataset::missing_fraction(int var) const {
  if (rows() == 0) return 0.0;
  return static_cast<double>((cells_.col(var).array() == kMissing).count()) / rows();
}

double DiscretizedDataset::max_missing_fraction() const {
  double m = 0.0;
  for (int c = 0; c < cols(); ++c) m = std::max(m, missing_fraction(c));
  return m;
}

DiscretizedDataset DiscretizedDataset::subset(const std::vector<int>& rows) const {
  Cells cells(static_cast<Eigen::Index>(rows.size()), cells_.cols());
  std::vector<std::string> fips;
  std::vector<int> years;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    cells.row(static_cast<Eigen::Index>(i)) = cells_.row(rows[i]);
    fips.push_back(county_fips_.at(rows[i]));
    years.push_back(years_.at(rows[i]));
  }
  return DiscretizedDataset(catalog_, std::move(fips), std::move(years), std::move(cells));
}

std::string DiscretizedDataset::to_csv() const {
  std::vector<std::string> header{"county_fips", "year"};
  for (const auto& n : catalog_.names()) header.push_back(n);
  std::string out = csv::join_line(header) + "\n";
  for (int r = 0; r < rows(); ++r) {
    std::vector<std::string> fields{county_fips_[r], std::to_string(years_[r])};
    for (int c = 0; c < cols(); ++c) {
      fields.push_back(cells_(r, c) == kMissing ? "NA" : std::to_string(cells_(r, c)));
    }
    out += csv::join_line(fields) + "\n";
  }
  return out;
}

nlohmann::ordered_json bin_scheme_to_json(const BinScheme& scheme) {
  nlohmann::ordered_json j;
  j["edges"] = scheme.edges();
  j["labels"] = scheme.labels();
  if (scheme.bin_means()) {
    j["bin_means"] = *scheme.bin_means();
  } else {
    j["bin_means"] = nullptr;
  }
  return j;
}

BinScheme bin_scheme_from_json(const nlohmann::json& j) {
  std::optional<std::vector<double>> means;
  if (j.contains("bin_means") && !j.at("bin_means").is_null()) {
    means = j.at("bin_means").get<std::vector<double>>();
  }
  return BinScheme(j.at("edges").get<std::vector<double>>(), std::move(means));
}

nlohmann::ordered_json DiscretizedDataset::schemes_json() const {
  nlohmann::ordered_json j;
  j["target"] = catalog_.target().name;
  j["variables"] = nlohmann::ordered_json::array();
  for (const auto& v : catalog_.variables()) {
    nlohmann::ordered_json e;
    e["name"] = v.name;
    e["kind"] = std::string(to_string(v.kind));
    e["tier"] = v.tier;
    const auto scheme = bin_scheme_to_json(v.bins);
    for (const auto& [k, val] : scheme.items()) e[k] = val;
    j["variables"].push_back(e);
  }
  return j;
}

DiscretizedDataset discretize_panel(const RawPanel& panel, const VariableCatalog& catalog) {
  DiscretizedDataset::Cells cells =
      DiscretizedDataset::Cells::Constant(panel.row_count(), catalog.size(), kMissing);
  for (int c = 0; c < catalog.size(); ++c) {
    const int pc = panel.column_index(catalog[c].name);
    if (pc < 0) continue;
    for (int r = 0; r < panel.row_count(); ++r) {
      if (const auto& v = panel.rows()[r].values[pc]) cells(r, c) = catalog[c].bins.bin_of(*v);
    }
  }
  std::vector<std::string> fips;
  std::vector<int> years;
  for (const auto& row : panel.rows()) {
    fips.push_back(row.county_fips);
    years.push_back(row.year);
  }
  return DiscretizedDataset(catalog, std::move(fips), std::move(years), std::move(cells));
}

VariableCatalog build_catalog(const RawPanel& train, const CatalogOptions& options) {
  const int target_col = train.column_index(options.target);
  if (target_col < 0) {
    throw Error(ErrorKind::SchemaError, fmt::format("panel has no target column '{}'", options.target));
  }
  auto tier_for = [&](const std::string& name, bool is_target) {
    auto it = options.tiers.find(name);
    return it != options.tiers.end() ? it->second : default_tier(name, is_target);
  };

  const auto target_values = train.column(options.target);
  std::vector<double> observed_targets;
  for (const auto& v : target_values) {
    if (v) observed_targets.push_back(*v);
  }
  BinScheme target_scheme;
  if (auto it = options.fixed_edges.find(options.target); it != options.fixed_edges.end()) {
    target_scheme = BinScheme(it->second);
  } else {
    target_scheme = discretize_column(observed_targets, options.max_bins);
  }
  target_scheme = compute_bin_means(observed_targets, target_scheme);

  std::vector<VariableSpec> specs;
  for (int c = 0; c < static_cast<int>(train.columns().size()); ++c) {
    const auto& name = train.columns()[c];
    if (c == target_col) {
      specs.push_back({name, VariableKind::Target, tier_for(name, true), target_scheme});
      continue;
    }
    BinScheme scheme;
    if (auto it = options.fixed_edges.find(name); it != options.fixed_edges.end()) {
      scheme = BinScheme(it->second);
    } else {
      std::vector<double> xs;
      std::vector<int> ys;
      for (const auto& row : train.rows()) {
        if (!row.values[c]) continue;
        xs.push_back(*row.values[c]);
        const auto& t = row.values[target_col];
        ys.push_back(t ? target_scheme.bin_of(*t) : kMissing);
      }
      try {
        scheme = discretize_column(xs, ys, options.max_bins);
      } catch (const Error& e) {
        throw e.with_context(fmt::format("column '{}'", name));
      }
    }
    const auto kind = options.derived.count(name) ? VariableKind::Derived : VariableKind::Raw;
    specs.push_back({name, kind, tier_for(name, false), std::move(scheme)});
  }
  return VariableCatalog(std::move(specs));
}

}  // namespace cornbn
