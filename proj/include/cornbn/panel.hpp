#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cornbn/weather.hpp"

namespace cornbn {

struct PanelRow {
  std::string county_fips;
  int year = 0;
  std::vector<std::optional<double>> values;  // aligned with RawPanel::columns()
};

/// County-year table of real-valued columns. Missing cells are nullopt.
class RawPanel {
 public:
  RawPanel() = default;
  RawPanel(std::vector<std::string> columns, std::vector<PanelRow> rows);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<PanelRow>& rows() const { return rows_; }
  int row_count() const { return static_cast<int>(rows_.size()); }

  int column_index(std::string_view name) const;  // -1 when absent
  std::vector<std::optional<double>> column(std::string_view name) const;

  RawPanel sorted() const;  // by (county_fips, year)
  RawPanel subset(const std::vector<int>& row_indices) const;

  // Required columns county_fips, year; all others real-valued.
  static RawPanel read_csv(const std::filesystem::path& path);
  static RawPanel parse_csv(std::string_view text, const std::string& source = "<panel>");
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<PanelRow> rows_;
};

enum class RecipeMode { GddSum, GddMean, RainTotal, TempMean, AnnualMean };

/// One derived column: `mode` applied to `inputs` for `month` of each county-year.
struct RecipeEntry {
  std::string output_name;
  RecipeMode mode = RecipeMode::GddSum;
  int month = 0;  // unused for AnnualMean
  std::vector<std::string> inputs;
};

std::vector<RecipeEntry> recipe_from_json(const nlohmann::json& j);
std::vector<RecipeEntry> load_recipe(const std::filesystem::path& path);

struct IngestOptions {
  AggregateOptions aggregate;
  double min_coverage = 0.8;  // fraction of calendar days that must be usable
};

/// Daily long-format table: one row per county and date.
/// Required columns county_fips, year, month, day; others real-valued.
struct DailyTable {
  std::vector<std::string> columns;
  std::vector<std::string> county_fips;
  std::vector<Date> dates;
  std::vector<std::vector<std::optional<double>>> values;

  static DailyTable read_csv(const std::filesystem::path& path);
  static DailyTable parse_csv(std::string_view text, const std::string& source = "<raw>");
};

/// Aggregate daily records into one panel row per (county, year), ordered by
/// county then year. Monthly aggregates below `min_coverage` are missing.
RawPanel ingest(const DailyTable& raw, const std::vector<RecipeEntry>& recipe,
                const IngestOptions& options = {});

}  // namespace cornbn
