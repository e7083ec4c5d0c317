#include "cornbn/score.hpp"

#include <cmath>

#include "cornbn/errors.hpp"

namespace cornbn {

Eigen::MatrixXd family_counts(const DiscretizedDataset& data, int node, std::span<const int> parents) {
  const auto& cat = data.catalog();
  long q = 1;
  for (int p : parents) q *= cat[p].bins.bin_count();
  const int r = cat[node].bins.bin_count();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(q, r);
  const auto& cells = data.cells();
  for (Eigen::Index row = 0; row < cells.rows(); ++row) {
    const int k = cells(row, node);
    if (k == kMissing) continue;
    long j = 0;
    bool complete = true;
    for (int p : parents) {
      const int s = cells(row, p);
      if (s == kMissing) {
        complete = false;
        break;
      }
      j = j * cat[p].bins.bin_count() + s;
    }
    if (complete) counts(j, k) += 1.0;
  }
  return counts;
}

double family_loglik(const Eigen::MatrixXd& counts) {
  double ll = 0.0;
  for (Eigen::Index j = 0; j < counts.rows(); ++j) {
    const double nj = counts.row(j).sum();
    if (nj <= 0) continue;
    for (Eigen::Index k = 0; k < counts.cols(); ++k) {
      const double n = counts(j, k);
      if (n > 0) ll += n * std::log(n / nj);
    }
  }
  return ll;
}

double family_bic(const Eigen::MatrixXd& counts) {
  const double n = counts.sum();
  if (n <= 0) return 0.0;
  const double params = static_cast<double>(counts.rows()) * static_cast<double>(counts.cols() - 1);
  return family_loglik(counts) - 0.5 * std::log(n) * params;
}

ScoredStructure bic_score(const Dag& dag, const DiscretizedDataset& data) {
  if (data.rows() == 0) throw Error(ErrorKind::EmptyData, "cannot score on an empty dataset");
  if (dag.nodes() != data.catalog().names()) {
    throw Error(ErrorKind::InvalidArgument, "graph nodes must match the dataset catalog");
  }
  ScoredStructure out{dag, 0.0, {}};
  for (int v = 0; v < dag.size(); ++v) {
    const double s = family_bic(family_counts(data, v, dag.parents(v)));
    out.per_node_scores.push_back(s);
    out.score += s;
  }
  return out;
}

}  // namespace cornbn
