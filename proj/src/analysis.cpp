#include "cornbn/analysis.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "cornbn/errors.hpp"
#include "csv.hpp"

namespace cornbn {

std::optional<double> ConfusionMatrix::accuracy() const {
  const long n = total();
  if (n == 0) return std::nullopt;
  return static_cast<double>(trace()) / static_cast<double>(n);
}

ConfusionMatrix confusion_matrix(const std::vector<std::pair<int, int>>& pairs, int k,
                                 std::vector<std::string> labels) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "bin count must be positive");
  if (labels.empty()) {
    for (int b = 0; b < k; ++b) labels.push_back(std::to_string(b));
  }
  if (static_cast<int>(labels.size()) != k) {
    throw Error(ErrorKind::InvalidArgument, "label count differs from bin count");
  }
  ConfusionMatrix cm{std::move(labels), Eigen::MatrixXi::Zero(k, k)};
  for (auto [t, p] : pairs) {
    if (t < 0 || t >= k || p < 0 || p >= k) {
      throw Error(ErrorKind::BinOutOfRange, fmt::format("pair ({}, {}) outside [0, {})", t, p, k));
    }
    ++cm.counts(t, p);
  }
  return cm;
}

double county_error(double actual, double predicted) {
  if (!(actual > 0)) {
    throw Error(ErrorKind::NonPositiveActual, fmt::format("actual yield {} is not positive", actual));
  }
  return 100.0 * std::abs(predicted - actual) / actual;
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

long accuracy_at_threshold(const std::vector<double>& errors, double threshold) {
  if (threshold < 0) throw Error(ErrorKind::InvalidArgument, "threshold must be non-negative");
  long n = 0;
  for (double e : errors) n += e <= threshold;
  return n;
}

int predicted_bin(const Eigen::VectorXd& probs) {
  int best = 0;
  for (Eigen::Index i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  }
  return best;
}

EvidenceSchedule::EvidenceSchedule(std::vector<Step> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw Error(ErrorKind::InvalidArgument, "evidence schedule is empty");
  for (std::size_t i = 1; i < steps_.size(); ++i) {
    if (!steps_[i].evidence.is_superset_of(steps_[i - 1].evidence)) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("step '{}' drops evidence from step '{}'", steps_[i].label,
                              steps_[i - 1].label));
    }
  }
}

std::vector<SweepResult> evidence_sweep(const BayesNet& net, const EvidenceSchedule& schedule) {
  std::vector<SweepResult> out;
  for (const auto& step : schedule.steps()) {
    try {
      out.push_back({step.label, expected_yield(net, step.evidence)});
    } catch (const Error& e) {
      throw e.with_context(fmt::format("step '{}'", step.label));
    }
  }
  return out;
}

std::vector<WhatIfEntry> whatif(const BayesNet& net, const std::string& variable,
                                const EvidenceSet& base_evidence) {
  const auto& cat = net.catalog();
  const auto& spec = cat.at(variable);
  if (spec.kind == VariableKind::Target) {
    throw Error(ErrorKind::InvalidArgument, "what-if variable cannot be the target");
  }
  if (base_evidence.contains(variable)) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("'{}' is already fixed by the base evidence", variable));
  }
  std::vector<WhatIfEntry> out;
  for (int b = 0; b < spec.bins.bin_count(); ++b) {
    WhatIfEntry entry{b, spec.bins.labels()[b], std::nullopt};
    try {
      entry.expected_yield = expected_yield(net, base_evidence.with(cat, variable, b)).expected_yield;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ImpossibleEvidence) throw;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

nlohmann::ordered_json EvaluationReport::to_json() const {
  nlohmann::ordered_json j;
  j["confusion_matrix"]["labels"] = confusion.bin_labels;
  auto grid = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < confusion.counts.rows(); ++r) {
    std::vector<int> row(confusion.counts.cols());
    for (Eigen::Index c = 0; c < confusion.counts.cols(); ++c) row[c] = confusion.counts(r, c);
    grid.push_back(row);
  }
  j["confusion_matrix"]["counts"] = grid;
  j["confusion_matrix"]["total"] = confusion.total();
  if (auto acc = confusion.accuracy()) {
    j["confusion_matrix"]["accuracy"] = *acc;
  } else {
    j["confusion_matrix"]["accuracy"] = nullptr;
  }
  j["counties"] = nlohmann::ordered_json::array();
  for (const auto& c : counties) {
    j["counties"].push_back({{"county_fips", c.county_fips},
                             {"year", c.year},
                             {"actual", c.actual},
                             {"predicted", c.predicted},
                             {"percent_diff", round_to(c.percent_diff, 2)},
                             {"true_bin", c.true_bin},
                             {"predicted_bin", c.predicted_bin}});
  }
  j["accuracy_at_threshold"] = nlohmann::ordered_json::array();
  for (auto [t, n] : accuracy_at) {
    j["accuracy_at_threshold"].push_back(
        {{"threshold_percent", t}, {"count", n}, {"of", static_cast<long>(counties.size())}});
  }
  j["skipped_rows"] = skipped_rows;
  return j;
}

std::string EvaluationReport::county_csv() const {
  std::string out = "county_fips,year,actual,predicted,percent_diff\n";
  for (const auto& c : counties) {
    out += csv::join_line({c.county_fips, std::to_string(c.year), format_number(c.actual),
                           format_number(c.predicted), fmt::format("{:.2f}", c.percent_diff)}) +
           "\n";
  }
  return out;
}

EvaluationReport evaluate(const BayesNet& net, const DiscretizedDataset& data,
                          const std::vector<std::optional<double>>& actual_yields,
                          const std::vector<double>& thresholds) {
  if (static_cast<int>(actual_yields.size()) != data.rows()) {
    throw Error(ErrorKind::InvalidArgument, "actual yields differ in length from the dataset");
  }
  const auto& cat = net.catalog();
  const int target = cat.target_index();
  const auto& scheme = cat.target().bins;
  EvaluationReport report;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> errors;
  for (int r = 0; r < data.rows(); ++r) {
    if (!actual_yields[r] || !(*actual_yields[r] > 0)) {
      ++report.skipped_rows;
      continue;
    }
    std::map<std::string, int> assignments;
    for (int v = 0; v < cat.size(); ++v) {
      if (v != target && data.at(r, v) != kMissing) assignments[cat[v].name] = data.at(r, v);
    }
    YieldForecast f;
    try {
      f = expected_yield(net, EvidenceSet(cat, std::move(assignments)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ImpossibleEvidence) throw;
      ++report.skipped_rows;
      continue;
    }
    CountyResult c;
    c.county_fips = data.county_fips()[r];
    c.year = data.years()[r];
    c.actual = *actual_yields[r];
    c.predicted = f.expected_yield;
    c.percent_diff = county_error(c.actual, c.predicted);
    c.true_bin = scheme.bin_of(c.actual);
    c.predicted_bin = predicted_bin(f.posterior.probs);
    pairs.emplace_back(c.true_bin, c.predicted_bin);
    errors.push_back(c.percent_diff);
    report.counties.push_back(std::move(c));
  }
  report.confusion = confusion_matrix(pairs, scheme.bin_count(), scheme.labels());
  for (double t : thresholds) report.accuracy_at.emplace_back(t, accuracy_at_threshold(errors, t));
  return report;
}

}  // namespace cornbn
