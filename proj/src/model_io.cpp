#include "cornbn/model_io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "cornbn/errors.hpp"
#include "cornbn/inference.hpp"
#include "csv.hpp"

namespace cornbn {

std::vector<EdgeStrength> edge_strengths(const BayesNet& net, const DiscretizedDataset* data) {
  std::vector<EdgeStrength> out;
  for (auto [p, c] : net.dag().edges()) {
    const auto& pn = net.dag().name(p);
    const auto& cn = net.dag().name(c);
    out.push_back({pn, cn, strength_of_influence(net, pn, cn, data)});
  }
  return out;
}

nlohmann::ordered_json model_to_json(const LearnedModel& model, bool include_cpts) {
  const auto& net = model.net;
  nlohmann::ordered_json j;
  j["version"] = kModelVersion;
  j["target"] = net.catalog().target().name;
  j["variables"] = nlohmann::ordered_json::array();
  for (const auto& v : net.catalog().variables()) {
    nlohmann::ordered_json e;
    e["name"] = v.name;
    e["kind"] = std::string(to_string(v.kind));
    e["tier"] = v.tier;
    e["edges"] = v.bins.edges();
    e["labels"] = v.bins.labels();
    if (v.bins.bin_means()) {
      e["bin_means"] = *v.bins.bin_means();
    } else {
      e["bin_means"] = nullptr;
    }
    j["variables"].push_back(std::move(e));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : model.edges) {
    j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"strength", e.strength}});
  }
  if (include_cpts) {
    j["cpts"] = nlohmann::ordered_json::array();
    for (const auto& cpt : net.cpts()) {
      nlohmann::ordered_json c;
      c["node"] = cpt.node();
      c["parents"] = cpt.parents();
      auto rows = nlohmann::ordered_json::array();
      for (Eigen::Index r = 0; r < cpt.table().rows(); ++r) {
        std::vector<double> row(cpt.table().cols());
        for (Eigen::Index k = 0; k < cpt.table().cols(); ++k) row[k] = cpt.table()(r, k);
        rows.push_back(row);
      }
      c["rows"] = std::move(rows);
      j["cpts"].push_back(std::move(c));
    }
  }
  return j;
}

LearnedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kModelVersion) {
      throw Error(ErrorKind::SchemaError,
                  fmt::format("unsupported model version {}", j.at("version").dump()));
    }
    const auto target = j.at("target").get<std::string>();
    std::vector<VariableSpec> specs;
    for (const auto& v : j.at("variables")) {
      std::optional<std::vector<double>> means;
      if (v.contains("bin_means") && !v.at("bin_means").is_null()) {
        means = v.at("bin_means").get<std::vector<double>>();
      }
      const auto name = v.at("name").get<std::string>();
      VariableKind kind = name == target ? VariableKind::Target : VariableKind::Raw;
      if (v.contains("kind")) kind = parse_variable_kind(v.at("kind").get<std::string>());
      specs.push_back({name, kind, v.at("tier").get<int>(),
                       BinScheme(v.at("edges").get<std::vector<double>>(), std::move(means))});
    }
    VariableCatalog catalog(std::move(specs));
    if (catalog.target().name != target) {
      throw Error(ErrorKind::SchemaError, "model target does not match the target variable");
    }
    std::vector<std::pair<std::string, std::string>> edge_names;
    std::vector<EdgeStrength> strengths;
    for (const auto& e : j.at("edges")) {
      edge_names.emplace_back(e.at("from").get<std::string>(), e.at("to").get<std::string>());
      strengths.push_back({edge_names.back().first, edge_names.back().second,
                           e.value("strength", 0.0)});
    }
    Dag dag(catalog.names(), edge_names);
    std::vector<Cpt> cpts;
    for (const auto& c : j.at("cpts")) {
      const auto node = c.at("node").get<std::string>();
      const auto parents = c.at("parents").get<std::vector<std::string>>();
      std::vector<int> cards;
      for (const auto& p : parents) cards.push_back(catalog.at(p).bins.bin_count());
      const auto& rows = c.at("rows");
      const int width = catalog.at(node).bins.bin_count();
      Eigen::MatrixXd table(static_cast<Eigen::Index>(rows.size()), width);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto row = rows[r].get<std::vector<double>>();
        if (static_cast<int>(row.size()) != width) {
          throw Error(ErrorKind::SchemaError, fmt::format("cpt '{}' row {} has wrong width", node, r));
        }
        for (int k = 0; k < width; ++k) table(static_cast<Eigen::Index>(r), k) = row[k];
      }
      cpts.emplace_back(node, parents, cards, std::move(table));
    }
    return {BayesNet(std::move(catalog), std::move(dag), std::move(cpts)), std::move(strengths)};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, fmt::format("malformed model: {}", e.what()));
  }
}

std::string dump_model(const LearnedModel& model) { return model_to_json(model).dump(2) + "\n"; }

void save_model(const LearnedModel& model, const std::filesystem::path& path) {
  csv::write_text(path, dump_model(model));
}

LearnedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, fmt::format("{}: {}", path.string(), e.what()));
  }
  return model_from_json(j);
}

}  // namespace cornbn
