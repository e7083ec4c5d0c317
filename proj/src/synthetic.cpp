#include "cornbn/synthetic.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cornbn/errors.hpp"
#include "cornbn/weather.hpp"
#include "csv.hpp"

namespace cornbn::synthetic {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int draw(std::mt19937_64& rng, const Eigen::VectorXd& probs) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(probs.size() - 1);
}

Cpt tabulate(const std::string& node, const std::vector<std::string>& parents,
             const std::vector<int>& parent_cards, int card,
             const std::function<std::vector<double>(std::span<const int>)>& row) {
  long rows = 1;
  for (int c : parent_cards) rows *= c;
  Eigen::MatrixXd table(rows, card);
  std::vector<int> states(parent_cards.size(), 0);
  for (long r = 0; r < rows; ++r) {
    long rem = r;
    for (int i = static_cast<int>(parent_cards.size()) - 1; i >= 0; --i) {
      states[i] = static_cast<int>(rem % parent_cards[i]);
      rem /= parent_cards[i];
    }
    auto p = row(states);
    double s = 0.0;
    for (double x : p) s += x;
    for (int k = 0; k < card; ++k) table(r, k) = p.at(k) / s;
  }
  return Cpt(node, parents, parent_cards, std::move(table));
}

DiscretizedDataset sample(const BayesNet& net, int rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto order = net.dag().topological_order();
  DiscretizedDataset::Cells cells(rows, net.size());
  std::vector<int> states;
  for (int r = 0; r < rows; ++r) {
    for (int v : order) {
      const auto& ps = net.dag().parents(v);
      states.resize(ps.size());
      for (std::size_t i = 0; i < ps.size(); ++i) states[i] = cells(r, ps[i]);
      const auto& cpt = net.cpt(v);
      cells(r, v) = draw(rng, cpt.table().row(cpt.row_index(states)).transpose());
    }
  }
  return DiscretizedDataset(net.catalog(), std::move(cells));
}

RawPanel to_panel(const DiscretizedDataset& states, const ValueRanges& ranges, std::uint64_t seed,
                  int first_year, int years_per_county) {
  std::mt19937_64 rng(seed);
  const auto& cat = states.catalog();
  std::vector<PanelRow> rows;
  const int per = years_per_county > 0 ? years_per_county : 1;
  for (int r = 0; r < states.rows(); ++r) {
    PanelRow row;
    row.county_fips = fmt::format("19{:03d}", 1 + 2 * (r / per));
    row.year = first_year + r % per;
    for (int v = 0; v < cat.size(); ++v) {
      const int s = states.at(r, v);
      if (s == kMissing) {
        row.values.emplace_back();
        continue;
      }
      const auto [lo, hi] = ranges.at(v).at(s);
      row.values.emplace_back(lo + (hi - lo) * uniform01(rng));
    }
    rows.push_back(std::move(row));
  }
  return RawPanel(cat.names(), std::move(rows));
}

namespace {

// Midpoints of the yield value ranges below.
const std::vector<double> kYieldMeans = {114.0, 140.0, 163.5, 195.5};

std::vector<double> peaked(int card, int mode, double mass) {
  std::vector<double> p(card, (1.0 - mass) / (card - 1));
  p[mode] = mass;
  return p;
}

BinScheme unit_scheme(int card) {
  std::vector<double> edges;
  for (int k = 1; k < card; ++k) edges.push_back(10.0 * k);
  return BinScheme(edges);
}

// Edges halfway across the gaps between consecutive value ranges.
BinScheme gap_scheme(const std::vector<std::pair<double, double>>& ranges) {
  std::vector<double> edges;
  for (std::size_t k = 1; k < ranges.size(); ++k) edges.push_back((ranges[k - 1].second + ranges[k].first) / 2.0);
  return BinScheme(edges);
}

}  // namespace

BayesNet six_node_network() {
  std::vector<VariableSpec> specs = {
      {"A", VariableKind::Raw, 0, unit_scheme(2)},
      {"B", VariableKind::Raw, 0, unit_scheme(3)},
      {"C", VariableKind::Raw, 0, unit_scheme(3)},
      {"D", VariableKind::Raw, 0, unit_scheme(3)},
      {"E", VariableKind::Raw, 0, unit_scheme(2)},
      {"Yield", VariableKind::Target, 0, BinScheme({131.0, 149.0, 178.0}, kYieldMeans)},
  };
  VariableCatalog cat(std::move(specs));
  Dag dag(cat.names(), {{"A", "C"}, {"B", "C"}, {"C", "D"}, {"D", "Yield"}, {"B", "E"}});
  std::vector<Cpt> cpts = {
      tabulate("A", {}, {}, 2, [](auto) { return std::vector<double>{0.5, 0.5}; }),
      tabulate("B", {}, {}, 3, [](auto) { return std::vector<double>{0.3, 0.4, 0.3}; }),
      tabulate("C", {"A", "B"}, {2, 3}, 3,
               [](auto s) { return peaked(3, (s[0] + s[1]) % 3, 0.85); }),
      tabulate("D", {"C"}, {3}, 3, [](auto s) { return peaked(3, 2 - s[0], 0.85); }),
      tabulate("E", {"B"}, {3}, 2, [](auto s) { return peaked(2, s[0] == 1 ? 1 : 0, 0.85); }),
      tabulate("Yield", {"D"}, {3}, 4, [](auto s) { return peaked(4, s[0] + (s[0] == 2), 0.85); }),
  };
  return BayesNet(std::move(cat), std::move(dag), std::move(cpts));
}

BayesNet whatif_network() {
  VariableCatalog cat({{"Soil_WA", VariableKind::Raw, 0, BinScheme({55.0, 70.0, 85.0})},
                       {"DI_Avg", VariableKind::Raw, 1, BinScheme({-2.0, 0.0, 2.0})},
                       {"RF_Jul", VariableKind::Derived, 4, BinScheme({3.0, 5.0})},
                       {"Yield", VariableKind::Target, 7,
                        BinScheme({131.0, 149.0, 178.0}, std::vector<double>{120.0, 140.0, 163.0, 190.0})}});
  Dag dag(cat.names(), {{"Soil_WA", "Yield"}, {"DI_Avg", "Yield"}});
  auto flat = [](int k) { return [k](auto) { return std::vector<double>(k, 1.0); }; };
  std::vector<Cpt> cpts = {
      tabulate("Soil_WA", {}, {}, 4, flat(4)),
      tabulate("DI_Avg", {}, {}, 4, [](auto) { return std::vector<double>{0.15, 0.35, 0.35, 0.15}; }),
      tabulate("RF_Jul", {}, {}, 3, flat(3)),
      tabulate("Yield", {"Soil_WA", "DI_Avg"}, {4, 4}, 4, [](auto s) {
        const bool extreme = s[1] == 0 || s[1] == 3;
        const int level = std::max(0, s[0] - (extreme ? 1 : 0));
        return peaked(4, level, 0.7);
      }),
  };
  return BayesNet(std::move(cat), std::move(dag), std::move(cpts));
}

namespace {

std::vector<std::pair<double, double>> unit_ranges(int card) {
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < card; ++k) out.emplace_back(10.0 * k + 1.0, 10.0 * k + 9.0);
  return out;
}

const std::vector<std::pair<double, double>> kYieldRanges = {
    {100.0, 128.0}, {133.0, 147.0}, {151.0, 176.0}, {181.0, 210.0}};

}  // namespace

ValueRanges six_node_ranges() {
  return {unit_ranges(2), unit_ranges(3), unit_ranges(3), unit_ranges(3), unit_ranges(2), kYieldRanges};
}

CropFixture crop_fixture(int counties, int years, std::uint64_t seed) {
  const std::vector<std::string> months = {"May", "Jun", "Jul", "Aug", "Sep"};
  const std::vector<std::pair<double, double>> soil_ranges = {{40.0, 55.0}, {60.0, 75.0}, {80.0, 95.0}};
  const std::vector<std::pair<double, double>> di_ranges = {{-4.0, -2.0}, {-1.0, 1.0}, {2.0, 4.0}};
  const std::vector<std::pair<double, double>> gdd_ranges = {{250.0, 320.0}, {340.0, 400.0}, {420.0, 480.0}};
  const std::vector<std::pair<double, double>> rf_ranges = {{1.0, 2.5}, {3.0, 4.5}, {5.0, 7.0}};
  std::vector<VariableSpec> specs;
  specs.push_back({"Soil_WA", VariableKind::Raw, 0, gap_scheme(soil_ranges)});
  specs.push_back({"DI_Avg", VariableKind::Raw, 1, gap_scheme(di_ranges)});
  for (int m = 0; m < 4; ++m) specs.push_back({"GDD_" + months[m], VariableKind::Derived, 2 + m, gap_scheme(gdd_ranges)});
  for (int m = 0; m < 5; ++m) specs.push_back({"RF_" + months[m], VariableKind::Derived, 2 + m, gap_scheme(rf_ranges)});
  specs.push_back({"Yield", VariableKind::Target, 7, BinScheme({131.0, 149.0, 178.0}, kYieldMeans)});
  VariableCatalog cat(std::move(specs));

  Dag dag(cat.names(), {{"GDD_May", "GDD_Jun"}, {"GDD_Jun", "GDD_Jul"}, {"GDD_Jul", "GDD_Aug"},
                        {"DI_Avg", "RF_Jul"}, {"RF_Jul", "RF_Aug"}, {"DI_Avg", "GDD_Jul"},
                        {"Soil_WA", "Yield"}, {"DI_Avg", "Yield"}});
  auto flat3 = [](auto) { return std::vector<double>{1.0, 1.0, 1.0}; };
  auto persist = [](auto s) { return peaked(3, s[0], 0.7); };
  std::vector<Cpt> cpts;
  cpts.push_back(tabulate("Soil_WA", {}, {}, 3, [](auto) { return std::vector<double>{0.3, 0.4, 0.3}; }));
  cpts.push_back(tabulate("DI_Avg", {}, {}, 3, [](auto) { return std::vector<double>{0.25, 0.5, 0.25}; }));
  cpts.push_back(tabulate("GDD_May", {}, {}, 3, flat3));
  cpts.push_back(tabulate("GDD_Jun", {"GDD_May"}, {3}, 3, persist));
  cpts.push_back(tabulate("GDD_Jul", {"DI_Avg", "GDD_Jun"}, {3, 3}, 3,
                          [](auto s) { return peaked(3, s[0] == 0 ? 2 : s[1], 0.7); }));
  cpts.push_back(tabulate("GDD_Aug", {"GDD_Jul"}, {3}, 3, persist));
  cpts.push_back(tabulate("RF_May", {}, {}, 3, flat3));
  cpts.push_back(tabulate("RF_Jun", {}, {}, 3, flat3));
  cpts.push_back(tabulate("RF_Jul", {"DI_Avg"}, {3}, 3, [](auto s) { return peaked(3, s[0], 0.75); }));
  cpts.push_back(tabulate("RF_Aug", {"RF_Jul"}, {3}, 3, persist));
  cpts.push_back(tabulate("RF_Sep", {}, {}, 3, flat3));
  // Yield class rises with soil quality and drops under drought or flooding.
  cpts.push_back(tabulate("Yield", {"Soil_WA", "DI_Avg"}, {3, 3}, 4, [](auto s) {
    const int level = std::min(3, s[0] + (s[1] == 1 ? 1 : 0));
    return peaked(4, level, 0.9);
  }));
  BayesNet truth(cat, dag, std::move(cpts));

  ValueRanges ranges(cat.size());
  ranges[cat.index_of("Soil_WA")] = soil_ranges;
  ranges[cat.index_of("DI_Avg")] = di_ranges;
  for (int m = 0; m < 4; ++m) ranges[cat.index_of("GDD_" + months[m])] = gdd_ranges;
  for (int m = 0; m < 5; ++m) ranges[cat.index_of("RF_" + months[m])] = rf_ranges;
  ranges[cat.target_index()] = kYieldRanges;

  // Soil is a county property: sample per county-year, then copy the first
  // year's soil state across the county.
  auto states = sample(truth, counties * years, seed);
  DiscretizedDataset::Cells cells = states.cells();
  const int soil = cat.index_of("Soil_WA");
  for (int c = 0; c < counties; ++c) {
    for (int y = 1; y < years; ++y) cells(c * years + y, soil) = cells(c * years, soil);
  }
  // Re-draw yield after fixing soil so the yield CPT still holds.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int di = cat.index_of("DI_Avg");
  const int target = cat.target_index();
  for (int r = 0; r < cells.rows(); ++r) {
    const std::vector<int> s = {cells(r, soil), cells(r, di)};
    const auto& cpt = truth.cpt(target);
    cells(r, target) = draw(rng, cpt.table().row(cpt.row_index(s)).transpose());
  }
  RawPanel panel = to_panel(DiscretizedDataset(cat, cells), ranges, seed + 1, 2005, years);

  // Daily records reproducing each monthly aggregate: t_min at the 50 °F
  // floor and a constant t_max, precipitation spread evenly. Annual values
  // sit on the first record of each county-year. One month in fifty is left
  // with only half its days so ingest marks it missing.
  CropFixture out;
  out.raw.columns = {"t_max", "t_min", "precip", "soil", "pdsi", "yield"};
  std::mt19937_64 gaps(seed + 2);
  for (const auto& row : panel.rows()) {
    auto value = [&](const std::string& name) { return *row.values[panel.column_index(name)]; };
    bool first = true;
    for (int m = 0; m < 5; ++m) {
      const int month = 5 + m;
      const int days = days_in_month(row.year, month);
      const int kept = uniform01(gaps) < 0.02 ? days / 2 : days;
      const double rain = value("RF_" + months[m]);
      const double gdd = m < 4 ? value("GDD_" + months[m]) : 300.0;
      for (int d = 1; d <= kept; ++d) {
        out.raw.county_fips.push_back(row.county_fips);
        out.raw.dates.push_back({row.year, month, d});
        std::vector<std::optional<double>> vals = {kGddFloor + 2.0 * gdd / days, kGddFloor, rain / days,
                                                   std::nullopt, std::nullopt, std::nullopt};
        if (first) {
          vals[3] = value("Soil_WA");
          vals[4] = value("DI_Avg");
          vals[5] = value("Yield");
          first = false;
        }
        out.raw.values.push_back(std::move(vals));
      }
    }
  }
  out.recipe.push_back({"Soil_WA", RecipeMode::AnnualMean, 0, {"soil"}});
  out.recipe.push_back({"DI_Avg", RecipeMode::AnnualMean, 0, {"pdsi"}});
  for (int m = 0; m < 4; ++m) out.recipe.push_back({"GDD_" + months[m], RecipeMode::GddSum, 5 + m, {"t_max", "t_min"}});
  for (int m = 0; m < 5; ++m) out.recipe.push_back({"RF_" + months[m], RecipeMode::RainTotal, 5 + m, {"precip"}});
  out.recipe.push_back({"Yield", RecipeMode::AnnualMean, 0, {"yield"}});

  std::set<NamedEdge> forbidden;
  for (int m = 0; m < 4; ++m) forbidden.emplace("Soil_WA", "GDD_" + months[m]);
  out.constraints = KnowledgeConstraints(std::move(forbidden), {});
  out.truth = std::move(truth);
  out.ranges = std::move(ranges);
  return out;
}

std::string daily_to_csv(const DailyTable& raw) {
  std::vector<std::string> header{"county_fips", "year", "month", "day"};
  header.insert(header.end(), raw.columns.begin(), raw.columns.end());
  std::string out = csv::join_line(header) + "\n";
  for (std::size_t r = 0; r < raw.dates.size(); ++r) {
    const auto& d = raw.dates[r];
    std::vector<std::string> f{raw.county_fips[r], std::to_string(d.year), std::to_string(d.month),
                               std::to_string(d.day)};
    for (const auto& v : raw.values[r]) f.push_back(v ? format_number(*v) : "NA");
    out += csv::join_line(f) + "\n";
  }
  return out;
}

nlohmann::json recipe_to_json(const std::vector<RecipeEntry>& recipe) {
  auto j = nlohmann::json::array();
  for (const auto& e : recipe) {
    std::string mode;
    switch (e.mode) {
      case RecipeMode::GddSum: mode = "gdd_sum"; break;
      case RecipeMode::GddMean: mode = "gdd_mean"; break;
      case RecipeMode::RainTotal: mode = "rain_total"; break;
      case RecipeMode::TempMean: mode = "temp_mean"; break;
      case RecipeMode::AnnualMean: mode = "annual_mean"; break;
    }
    nlohmann::json item = {{"output_name", e.output_name}, {"mode", mode}, {"inputs", e.inputs}};
    if (e.mode != RecipeMode::AnnualMean) item["month"] = e.month;
    j.push_back(item);
  }
  return j;
}

}  // namespace cornbn::synthetic
