#pragma once

#include <vector>

#include "cornbn/catalog.hpp"
#include "cornbn/cpt.hpp"
#include "cornbn/dag.hpp"
#include "cornbn/factor.hpp"

namespace cornbn {

/// Catalog + structure + one CPT per node. DAG nodes are the catalog names in
/// catalog order, and each CPT lists its node's parents in DAG order.
class BayesNet {
 public:
  BayesNet() = default;
  BayesNet(VariableCatalog catalog, Dag dag, std::vector<Cpt> cpts);

  const VariableCatalog& catalog() const { return catalog_; }
  const Dag& dag() const { return dag_; }
  const std::vector<Cpt>& cpts() const { return cpts_; }
  const Cpt& cpt(int node) const { return cpts_.at(node); }
  int size() const { return catalog_.size(); }

  // CPT of `node` as a factor over its family.
  Factor family_factor(int node) const;

 private:
  VariableCatalog catalog_;
  Dag dag_;
  std::vector<Cpt> cpts_;
};

}  // namespace cornbn
