#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cornbn/bayes_net.hpp"
#include "cornbn/dataset.hpp"

namespace cornbn {

inline constexpr int kModelVersion = 1;

struct EdgeStrength {
  std::string from;
  std::string to;
  double strength = 0.0;
};

struct LearnedModel {
  BayesNet net;
  std::vector<EdgeStrength> edges;  // DAG edge order
};

/// Edge strengths for every DAG edge, weighted by `data` when given.
std::vector<EdgeStrength> edge_strengths(const BayesNet& net, const DiscretizedDataset* data);

/// Versioned model document:
///   {"version":1, "target":..., "variables":[{name,kind,tier,edges,labels,bin_means}],
///    "edges":[{from,to,strength}], "cpts":[{node,parents,rows}]}
/// Variables follow catalog order, edges DAG order (parent index, then
/// child index), and CPT rows the mixed-radix parent order of Cpt.
nlohmann::ordered_json model_to_json(const LearnedModel& model, bool include_cpts = true);
LearnedModel model_from_json(const nlohmann::json& j);

std::string dump_model(const LearnedModel& model);
void save_model(const LearnedModel& model, const std::filesystem::path& path);
LearnedModel load_model(const std::filesystem::path& path);

}  // namespace cornbn
