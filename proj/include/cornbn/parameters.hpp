#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cornbn/cpt.hpp"
#include "cornbn/dag.hpp"
#include "cornbn/dataset.hpp"

namespace cornbn {

/// Smoothed estimate (n_jk + alpha) / (n_j + alpha * r) from a count table.
/// Rows with zero mass and alpha = 0 throw EmptyFamily unless `fallback`
/// supplies a row to keep.
Eigen::MatrixXd estimate_table(const Eigen::MatrixXd& counts, double alpha,
                               const Eigen::MatrixXd* fallback = nullptr);

/// Available-case smoothed maximum likelihood, one CPT per node of `dag`.
std::vector<Cpt> fit_parameters(const Dag& dag, const DiscretizedDataset& data, double alpha);

struct EmResult {
  std::vector<Cpt> cpts;
  std::vector<double> log_likelihood;  // observed-data ln P(D | theta_t), one per iteration
  // log_likelihood + alpha * sum ln theta: the quantity EM with smoothed
  // M-steps never decreases. Equal to log_likelihood when alpha = 0.
  std::vector<double> objective;
  int iterations = 0;
  bool converged = true;  // false: max_iters reached first (warning only)
};

/// Expectation maximization for data with missing cells. The E-step computes
/// expected family counts by exact inference per distinct row pattern; the
/// M-step applies estimate_table. Stops once the objective improves by less
/// than `tol`. Complete data returns fit_parameters directly.
EmResult em_fit(const Dag& dag, const DiscretizedDataset& data, double alpha, double tol = 1e-6,
                int max_iters = 100);

}  // namespace cornbn
