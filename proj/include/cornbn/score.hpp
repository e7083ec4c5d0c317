#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cornbn/dag.hpp"
#include "cornbn/dataset.hpp"

namespace cornbn {

/// Counts n_jk of `node` state k under parent configuration j (mixed radix,
/// first parent most significant). Rows missing any family member are skipped.
Eigen::MatrixXd family_counts(const DiscretizedDataset& data, int node, std::span<const int> parents);

/// BIC of one family from its count table:
///   sum_jk n_jk ln(n_jk / n_j) - (ln N / 2) * q * (r - 1),
/// with N the number of counted rows and 0 ln 0 = 0. Zero when N = 0.
double family_bic(const Eigen::MatrixXd& counts);
double family_loglik(const Eigen::MatrixXd& counts);

struct ScoredStructure {
  Dag dag;
  double score = 0.0;                 // higher is better
  std::vector<double> per_node_scores;  // aligned with dag.nodes()

  double node_score(const std::string& name) const { return per_node_scores.at(dag.index_of(name)); }
};

/// Decomposable BIC of `dag` on `data`. Throws EmptyData when data has no rows.
ScoredStructure bic_score(const Dag& dag, const DiscretizedDataset& data);

}  // namespace cornbn
