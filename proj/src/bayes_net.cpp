#include "cornbn/bayes_net.hpp"

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

BayesNet::BayesNet(VariableCatalog catalog, Dag dag, std::vector<Cpt> cpts)
    : catalog_(std::move(catalog)), dag_(std::move(dag)) {
  if (dag_.nodes() != catalog_.names()) {
    throw Error(ErrorKind::InvalidArgument, "network graph nodes must equal the catalog names in order");
  }
  if (static_cast<int>(cpts.size()) != catalog_.size()) {
    throw Error(ErrorKind::InvalidCpt, "network needs exactly one CPT per node");
  }
  cpts_.resize(cpts.size());
  std::vector<char> seen(cpts.size(), 0);
  for (auto& cpt : cpts) {
    const int v = catalog_.index_of(cpt.node());
    if (seen[v]) throw Error(ErrorKind::InvalidCpt, fmt::format("two CPTs for '{}'", cpt.node()));
    seen[v] = 1;
    if (cpt.parents() != dag_.parent_names(v)) {
      throw Error(ErrorKind::InvalidCpt,
                  fmt::format("CPT parents of '{}' differ from the graph", cpt.node()));
    }
    if (cpt.cardinality() != catalog_[v].bins.bin_count()) {
      throw Error(ErrorKind::InvalidCpt, fmt::format("CPT of '{}' has wrong width", cpt.node()));
    }
    const auto& ps = dag_.parents(v);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (cpt.parent_cards()[i] != catalog_[ps[i]].bins.bin_count()) {
        throw Error(ErrorKind::InvalidCpt,
                    fmt::format("CPT of '{}' has wrong cardinality for parent '{}'", cpt.node(),
                                catalog_[ps[i]].name));
      }
    }
    cpts_[v] = std::move(cpt);
  }
}

Factor BayesNet::family_factor(int node) const {
  const auto& cpt = cpts_.at(node);
  std::vector<int> vars = dag_.parents(node);
  std::vector<int> cards = cpt.parent_cards();
  vars.push_back(node);
  cards.push_back(cpt.cardinality());
  // Row-major flattening puts parents (mixed radix) before the node's own state.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = cpt.table();
  Factor::Values flat = Eigen::Map<const Factor::Values>(rm.data(), rm.size());
  return Factor::from_layout(vars, cards, flat);
}

}  // namespace cornbn
