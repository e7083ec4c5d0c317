#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cornbn/analysis.hpp"
#include "cornbn/constraints.hpp"
#include "cornbn/dataset.hpp"
#include "cornbn/errors.hpp"
#include "cornbn/model_io.hpp"
#include "cornbn/panel.hpp"
#include "cornbn/search.hpp"

namespace cornbn {

/// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitInfeasible = 3;

int exit_code_for(ErrorKind kind);

struct SplitResult {
  RawPanel train;
  RawPanel test;
};

/// Whole county-year rows go to train or test. The default draws a uniform
/// random subset of round(fraction * rows) training rows from `seed`; by year,
/// the latest years form the test set.
SplitResult split_panel(const RawPanel& panel, double fraction, std::uint64_t seed,
                        bool by_year = false);

struct LearnConfig {
  CatalogOptions catalog;
  SearchConfig search;
  double alpha = 1.0;
  // EM is used once any variable has more than this fraction missing.
  double em_threshold = 0.05;
};

/// Fixed bin edges per variable: {"Yield": [131, 149, 178], ...}.
std::map<std::string, std::vector<double>> load_fixed_edges(const std::filesystem::path& path);

/// discretize -> learn_structure -> parameters -> edge strengths.
LearnedModel learn_model(const RawPanel& train, const KnowledgeConstraints& kc,
                         const LearnConfig& config);

/// One forecast row per panel row: county_fips, year, expected_yield, one
/// posterior column per yield bin and an error column. Target values in the
/// panel are ignored; missing cells are left out of the evidence.
std::string predict_csv(const BayesNet& net, const RawPanel& evidence);

/// Confusion matrix, county errors and accuracy at the given thresholds.
EvaluationReport evaluate_panel(const BayesNet& net, const RawPanel& test,
                                const std::vector<double>& thresholds = {20.0});

}  // namespace cornbn
