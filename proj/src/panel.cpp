#include "cornbn/panel.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "cornbn/bin_scheme.hpp"
#include "cornbn/errors.hpp"
#include "csv.hpp"

namespace cornbn {

RawPanel::RawPanel(std::vector<std::string> columns, std::vector<PanelRow> rows)
    : columns_(std::move(columns)), rows_(std::move(rows)) {
  std::set<std::string> names;
  for (const auto& c : columns_) {
    if (c == "county_fips" || c == "year" || !names.insert(c).second) {
      throw Error(ErrorKind::SchemaError, fmt::format("duplicate or reserved column '{}'", c));
    }
  }
  std::set<std::pair<std::string, int>> keys;
  for (const auto& r : rows_) {
    if (r.values.size() != columns_.size()) {
      throw Error(ErrorKind::SchemaError, "panel row width does not match its columns");
    }
    if (!keys.emplace(r.county_fips, r.year).second) {
      throw Error(ErrorKind::SchemaError,
                  fmt::format("duplicate county-year ({}, {})", r.county_fips, r.year));
    }
  }
}

int RawPanel::column_index(std::string_view name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  return it == columns_.end() ? -1 : static_cast<int>(it - columns_.begin());
}

std::vector<std::optional<double>> RawPanel::column(std::string_view name) const {
  const int c = column_index(name);
  if (c < 0) throw Error(ErrorKind::UnknownVariable, fmt::format("panel has no column '{}'", name));
  std::vector<std::optional<double>> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r.values[c]);
  return out;
}

RawPanel RawPanel::sorted() const {
  auto rows = rows_;
  std::sort(rows.begin(), rows.end(), [](const PanelRow& a, const PanelRow& b) {
    return std::tie(a.county_fips, a.year) < std::tie(b.county_fips, b.year);
  });
  return RawPanel(columns_, std::move(rows));
}

RawPanel RawPanel::subset(const std::vector<int>& row_indices) const {
  std::vector<PanelRow> rows;
  rows.reserve(row_indices.size());
  for (int i : row_indices) rows.push_back(rows_.at(i));
  return RawPanel(columns_, std::move(rows));
}

namespace {

int parse_int(std::string_view text, const std::string& where) {
  auto v = csv::parse_cell(text, where);
  if (!v || *v != static_cast<int>(*v)) {
    throw Error(ErrorKind::SchemaError, fmt::format("{}: '{}' is not an integer", where, text));
  }
  return static_cast<int>(*v);
}

}  // namespace

RawPanel RawPanel::parse_csv(std::string_view text, const std::string& source) {
  const auto table = csv::parse(text, source);
  const int fips_col = table.require_column("county_fips", source);
  const int year_col = table.require_column("year", source);
  std::vector<int> value_cols;
  std::vector<std::string> columns;
  for (int c = 0; c < static_cast<int>(table.header.size()); ++c) {
    if (c == fips_col || c == year_col) continue;
    value_cols.push_back(c);
    columns.push_back(table.header[c]);
  }
  std::vector<PanelRow> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& fields = table.rows[r];
    const int line = table.line_numbers[r];
    PanelRow row;
    row.county_fips = fields[fips_col];
    if (row.county_fips.empty()) {
      throw Error(ErrorKind::SchemaError, fmt::format("{}:{}: empty county_fips", source, line));
    }
    row.year = parse_int(fields[year_col], fmt::format("{}:{}: column 'year'", source, line));
    for (std::size_t k = 0; k < value_cols.size(); ++k) {
      row.values.push_back(csv::parse_cell(
          fields[value_cols[k]], fmt::format("{}:{}: column '{}'", source, line, columns[k])));
    }
    rows.push_back(std::move(row));
  }
  try {
    return RawPanel(std::move(columns), std::move(rows));
  } catch (const Error& e) {
    throw e.with_context(source);
  }
}

RawPanel RawPanel::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text, path.string());
}

std::string RawPanel::to_csv() const {
  std::vector<std::string> header{"county_fips", "year"};
  header.insert(header.end(), columns_.begin(), columns_.end());
  std::string out = csv::join_line(header) + "\n";
  for (const auto& r : rows_) {
    std::vector<std::string> fields{r.county_fips, std::to_string(r.year)};
    for (const auto& v : r.values) fields.push_back(v ? format_number(*v) : "NA");
    out += csv::join_line(fields) + "\n";
  }
  return out;
}

void RawPanel::write_csv(const std::filesystem::path& path) const { csv::write_text(path, to_csv()); }

std::vector<RecipeEntry> recipe_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::SchemaError, "recipe must be a JSON list");
  static const std::map<std::string, RecipeMode> modes = {
      {"gdd_sum", RecipeMode::GddSum},       {"gdd_mean", RecipeMode::GddMean},
      {"rain_total", RecipeMode::RainTotal}, {"temp_mean", RecipeMode::TempMean},
      {"annual_mean", RecipeMode::AnnualMean}};
  std::vector<RecipeEntry> out;
  for (const auto& item : j) {
    try {
      RecipeEntry e;
      e.output_name = item.at("output_name").get<std::string>();
      const auto mode = item.at("mode").get<std::string>();
      auto it = modes.find(mode);
      if (it == modes.end()) {
        throw Error(ErrorKind::SchemaError, fmt::format("unknown recipe mode '{}'", mode));
      }
      e.mode = it->second;
      if (e.mode != RecipeMode::AnnualMean) e.month = item.at("month").get<int>();
      e.inputs = item.at("inputs").get<std::vector<std::string>>();
      const std::size_t need = (e.mode == RecipeMode::GddSum || e.mode == RecipeMode::GddMean ||
                                e.mode == RecipeMode::TempMean)
                                   ? 2
                                   : 1;
      if (e.inputs.size() != need) {
        throw Error(ErrorKind::SchemaError,
                    fmt::format("recipe '{}' needs {} input(s)", e.output_name, need));
      }
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorKind::SchemaError, fmt::format("bad recipe entry: {}", ex.what()));
    }
  }
  return out;
}

std::vector<RecipeEntry> load_recipe(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
  try {
    return recipe_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::SchemaError, fmt::format("{}: {}", path.string(), ex.what()));
  }
}

DailyTable DailyTable::parse_csv(std::string_view text, const std::string& source) {
  const auto table = csv::parse(text, source);
  const int fips_col = table.require_column("county_fips", source);
  const int year_col = table.require_column("year", source);
  const int month_col = table.require_column("month", source);
  const int day_col = table.require_column("day", source);
  DailyTable out;
  std::vector<int> value_cols;
  for (int c = 0; c < static_cast<int>(table.header.size()); ++c) {
    if (c == fips_col || c == year_col || c == month_col || c == day_col) continue;
    value_cols.push_back(c);
    out.columns.push_back(table.header[c]);
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& f = table.rows[r];
    const int line = table.line_numbers[r];
    auto where = [&](std::string_view col) { return fmt::format("{}:{}: column '{}'", source, line, col); };
    Date d{parse_int(f[year_col], where("year")), parse_int(f[month_col], where("month")),
           parse_int(f[day_col], where("day"))};
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) {
      throw Error(ErrorKind::SchemaError, fmt::format("{}:{}: invalid date", source, line));
    }
    out.county_fips.push_back(f[fips_col]);
    out.dates.push_back(d);
    std::vector<std::optional<double>> vals;
    for (std::size_t k = 0; k < value_cols.size(); ++k) {
      vals.push_back(csv::parse_cell(f[value_cols[k]], where(out.columns[k])));
    }
    out.values.push_back(std::move(vals));
  }
  return out;
}

DailyTable DailyTable::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text, path.string());
}

RawPanel ingest(const DailyTable& raw, const std::vector<RecipeEntry>& recipe,
                const IngestOptions& options) {
  auto col = [&](const std::string& name) {
    auto it = std::find(raw.columns.begin(), raw.columns.end(), name);
    if (it == raw.columns.end()) {
      throw Error(ErrorKind::SchemaError, fmt::format("raw data has no column '{}'", name));
    }
    return static_cast<int>(it - raw.columns.begin());
  };
  std::map<std::pair<std::string, int>, std::vector<int>> groups;
  for (std::size_t r = 0; r < raw.dates.size(); ++r) {
    groups[{raw.county_fips[r], raw.dates[r].year}].push_back(static_cast<int>(r));
  }
  std::vector<std::string> columns;
  for (const auto& e : recipe) columns.push_back(e.output_name);
  std::vector<PanelRow> rows;
  for (const auto& [key, members] : groups) {
    PanelRow row{key.first, key.second, {}};
    for (const auto& e : recipe) {
      std::optional<double> value;
      if (e.mode == RecipeMode::AnnualMean) {
        const int c = col(e.inputs[0]);
        double sum = 0.0;
        int n = 0;
        for (int r : members) {
          if (const auto& v = raw.values[r][c]) {
            sum += *v;
            ++n;
          }
        }
        if (n > 0) value = sum / n;
      } else {
        std::vector<DailyWeather> days;
        const bool rain = e.mode == RecipeMode::RainTotal;
        const int c0 = col(e.inputs[0]);
        const int c1 = rain ? -1 : col(e.inputs[1]);
        for (int r : members) {
          if (raw.dates[r].month != e.month) continue;
          DailyWeather d{raw.dates[r], {}, {}, {}};
          if (rain) {
            d.precip = raw.values[r][c0];
          } else {
            d.t_max = raw.values[r][c0];
            d.t_min = raw.values[r][c1];
          }
          days.push_back(d);
        }
        AggregateMode mode = AggregateMode::GddSum;
        switch (e.mode) {
          case RecipeMode::GddSum: mode = AggregateMode::GddSum; break;
          case RecipeMode::GddMean: mode = AggregateMode::GddMean; break;
          case RecipeMode::RainTotal: mode = AggregateMode::RainTotal; break;
          case RecipeMode::TempMean: mode = AggregateMode::TempMean; break;
          case RecipeMode::AnnualMean: break;
        }
        const int calendar = days_in_month(key.second, e.month);
        try {
          const auto agg = aggregate_month(days, e.month, mode, options.aggregate);
          if (agg.used_days >= options.min_coverage * calendar) value = agg.value;
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::EmptyMonth) {
            throw err.with_context(fmt::format("county {} year {} '{}'", key.first, key.second, e.output_name));
          }
        }
      }
      row.values.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  return RawPanel(std::move(columns), std::move(rows));
}

}  // namespace cornbn
