#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "cornbn/inference.hpp"

namespace cornbn {

struct ConfusionMatrix {
  std::vector<std::string> bin_labels;
  Eigen::MatrixXi counts;  // rows = true bin, columns = predicted bin

  long total() const { return counts.sum(); }
  long trace() const { return counts.trace(); }
  // Absent when there is nothing to evaluate.
  std::optional<double> accuracy() const;
};

ConfusionMatrix confusion_matrix(const std::vector<std::pair<int, int>>& pairs, int k,
                                 std::vector<std::string> labels = {});

/// Percent error 100 * |predicted - actual| / actual.
double county_error(double actual, double predicted);

double round_to(double value, int decimals);

/// Number of errors at or below `threshold` percent.
long accuracy_at_threshold(const std::vector<double>& errors, double threshold);

/// Most probable bin, lowest index on ties.
int predicted_bin(const Eigen::VectorXd& probs);

/// Evidence sets that only ever grow from one step to the next.
class EvidenceSchedule {
 public:
  struct Step {
    std::string label;
    EvidenceSet evidence;
  };

  EvidenceSchedule() = default;
  explicit EvidenceSchedule(std::vector<Step> steps);

  const std::vector<Step>& steps() const { return steps_; }

 private:
  std::vector<Step> steps_;
};

struct SweepResult {
  std::string label;
  YieldForecast forecast;
};

std::vector<SweepResult> evidence_sweep(const BayesNet& net, const EvidenceSchedule& schedule);

struct WhatIfEntry {
  int bin = 0;
  std::string label;
  std::optional<double> expected_yield;  // empty when that bin is impossible given the base evidence
};

std::vector<WhatIfEntry> whatif(const BayesNet& net, const std::string& variable,
                                const EvidenceSet& base_evidence);

struct CountyResult {
  std::string county_fips;
  int year = 0;
  double actual = 0.0;
  double predicted = 0.0;
  double percent_diff = 0.0;
  int true_bin = 0;
  int predicted_bin = 0;
};

struct EvaluationReport {
  ConfusionMatrix confusion;
  std::vector<CountyResult> counties;
  std::vector<std::pair<double, long>> accuracy_at;  // (threshold %, count)
  int skipped_rows = 0;                              // no actual yield or impossible evidence

  nlohmann::ordered_json to_json() const;
  std::string county_csv() const;
};

/// Predict every row of `data` from its non-target cells and compare with
/// the observed target value in `actual_yields`.
EvaluationReport evaluate(const BayesNet& net, const DiscretizedDataset& data,
                          const std::vector<std::optional<double>>& actual_yields,
                          const std::vector<double>& thresholds = {20.0});

}  // namespace cornbn
