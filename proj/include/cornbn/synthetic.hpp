#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cornbn/bayes_net.hpp"
#include "cornbn/constraints.hpp"
#include "cornbn/dataset.hpp"
#include "cornbn/panel.hpp"

namespace cornbn::synthetic {

// Uniform in [0, 1) from the top 53 bits; stable across standard libraries.
double uniform01(std::mt19937_64& rng);
int draw(std::mt19937_64& rng, const Eigen::VectorXd& probs);

/// CPT whose row for each parent configuration comes from `row`.
Cpt tabulate(const std::string& node, const std::vector<std::string>& parents,
             const std::vector<int>& parent_cards, int card,
             const std::function<std::vector<double>(std::span<const int>)>& row);

/// Forward sample of `rows` complete cases.
DiscretizedDataset sample(const BayesNet& net, int rows, std::uint64_t seed);

/// Continuous value ranges per variable and state: value ~ U[lo, hi).
using ValueRanges = std::vector<std::vector<std::pair<double, double>>>;

/// Turn sampled states into a county-year panel of continuous values.
RawPanel to_panel(const DiscretizedDataset& states, const ValueRanges& ranges, std::uint64_t seed,
                  int first_year = 2005, int years_per_county = 0);

/// Six-node reference network with strong dependencies:
/// A -> C <- B, C -> D, D -> Yield, B -> E.
BayesNet six_node_network();
ValueRanges six_node_ranges();

/// What-if reference network. Yield (bin means 120, 140, 163, 190) rises
/// with the soil rating Soil_WA in every drought bin, and both extreme
/// DI_Avg bins depress it. RF_Jul is unconnected.
BayesNet whatif_network();

/// Twelve-variable crop network, its daily raw records, ingest recipe and
/// constraints. Yield depends on soil rating and drought index; the most
/// probable yield bin given its parents carries 0.9 of the mass.
struct CropFixture {
  BayesNet truth;
  ValueRanges ranges;
  DailyTable raw;
  std::vector<RecipeEntry> recipe;
  KnowledgeConstraints constraints;
};

CropFixture crop_fixture(int counties, int years, std::uint64_t seed);

std::string daily_to_csv(const DailyTable& raw);
nlohmann::json recipe_to_json(const std::vector<RecipeEntry>& recipe);

}  // namespace cornbn::synthetic
