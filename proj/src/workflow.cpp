#include "cornbn/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cornbn/inference.hpp"
#include "cornbn/parameters.hpp"
#include "csv.hpp"

namespace cornbn {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SchemaError:
    case ErrorKind::IoError:
      return kExitSchema;
    case ErrorKind::InfeasibleConstraints:
      return kExitInfeasible;
    default:
      return kExitFailure;
  }
}

SplitResult split_panel(const RawPanel& panel, double fraction, std::uint64_t seed, bool by_year) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("split fraction {} outside (0, 1)", fraction));
  }
  const int n = panel.row_count();
  std::vector<int> train, test;
  if (by_year) {
    std::set<int> years;
    for (const auto& row : panel.rows()) years.insert(row.year);
    const std::vector<int> ordered(years.begin(), years.end());
    const auto keep = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(ordered.size())));
    const int last_train_year = keep == 0 ? ordered.front() - 1 : ordered[std::min(keep, ordered.size()) - 1];
    for (int r = 0; r < n; ++r) (panel.rows()[r].year <= last_train_year ? train : test).push_back(r);
  } else {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // Fisher-Yates with an explicit draw so the split does not depend on the
    // standard library's distribution implementation.
    std::mt19937_64 rng(seed);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(idx[i], idx[j]);
    }
    const auto keep = static_cast<int>(std::lround(fraction * n));
    train.assign(idx.begin(), idx.begin() + keep);
    test.assign(idx.begin() + keep, idx.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
  }
  return {panel.subset(train), panel.subset(test)};
}

std::map<std::string, std::vector<double>> load_fixed_edges(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open {}", path.string()));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, fmt::format("{}: {}", path.string(), e.what()));
  }
  if (!j.is_object()) throw Error(ErrorKind::SchemaError, "bins file must map variable names to edge lists");
  std::map<std::string, std::vector<double>> out;
  for (const auto& [name, edges] : j.items()) {
    if (!edges.is_array()) throw Error(ErrorKind::SchemaError, fmt::format("edges for '{}' must be a list", name));
    out[name] = edges.get<std::vector<double>>();
  }
  return out;
}

LearnedModel learn_model(const RawPanel& train, const KnowledgeConstraints& kc, const LearnConfig& config) {
  auto catalog = build_catalog(train, config.catalog);
  auto data = discretize_panel(train, catalog);
  spdlog::info("learning structure over {} variables, {} rows", catalog.size(), data.rows());
  auto scored = learn_structure(data, kc, config.search);
  std::vector<Cpt> cpts;
  const double missing = data.max_missing_fraction();
  if (missing > config.em_threshold) {
    auto em = em_fit(scored.dag, data, config.alpha);
    if (!em.converged) spdlog::warn("EM stopped after {} iterations without converging", em.iterations);
    cpts = std::move(em.cpts);
  } else {
    cpts = fit_parameters(scored.dag, data, config.alpha);
  }
  LearnedModel model{BayesNet(catalog, scored.dag, std::move(cpts)), {}};
  model.edges = edge_strengths(model.net, &data);
  spdlog::info("learned {} edges, BIC {}", model.edges.size(), scored.score);
  return model;
}

namespace {

EvidenceSet row_evidence(const BayesNet& net, const DiscretizedDataset& data, int row) {
  const auto& cat = net.catalog();
  std::map<std::string, int> ev;
  for (int v = 0; v < cat.size(); ++v) {
    if (v == cat.target_index()) continue;
    const int b = data.at(row, v);
    if (b != kMissing) ev.emplace(cat[v].name, b);
  }
  return EvidenceSet(cat, std::move(ev));
}

}  // namespace

std::string predict_csv(const BayesNet& net, const RawPanel& evidence) {
  const auto data = discretize_panel(evidence, net.catalog());
  const auto& target = net.catalog().target();
  std::vector<std::string> header{"county_fips", "year", "expected_yield"};
  for (int k = 0; k < target.bins.bin_count(); ++k) header.push_back(fmt::format("p_bin{}", k));
  header.push_back("error");
  std::string out = csv::join_line(header) + "\n";
  for (int r = 0; r < data.rows(); ++r) {
    const auto& row = evidence.rows()[r];
    std::vector<std::string> fields{row.county_fips, std::to_string(row.year)};
    try {
      const auto forecast = expected_yield(net, row_evidence(net, data, r));
      fields.push_back(format_number(forecast.expected_yield));
      for (Eigen::Index k = 0; k < forecast.posterior.probs.size(); ++k) {
        fields.push_back(format_number(forecast.posterior.probs[k]));
      }
      fields.emplace_back();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ImpossibleEvidence) throw;
      fields.emplace_back("NA");
      for (int k = 0; k < target.bins.bin_count(); ++k) fields.emplace_back("NA");
      fields.emplace_back(to_string(e.kind()));
    }
    out += csv::join_line(fields) + "\n";
  }
  return out;
}

EvaluationReport evaluate_panel(const BayesNet& net, const RawPanel& test, const std::vector<double>& thresholds) {
  const auto& target = net.catalog().target().name;
  if (test.column_index(target) < 0) {
    throw Error(ErrorKind::SchemaError, fmt::format("missing required column '{}'", target));
  }
  const auto data = discretize_panel(test, net.catalog());
  return evaluate(net, data, test.column(target), thresholds);
}

}  // namespace cornbn
