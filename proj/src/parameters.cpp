#include "cornbn/parameters.hpp"

#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cornbn/bayes_net.hpp"
#include "cornbn/errors.hpp"
#include "cornbn/inference.hpp"
#include "cornbn/score.hpp"

namespace cornbn {

Eigen::MatrixXd estimate_table(const Eigen::MatrixXd& counts, double alpha,
                               const Eigen::MatrixXd* fallback) {
  if (alpha < 0) throw Error(ErrorKind::InvalidArgument, "alpha must be non-negative");
  const auto r = counts.cols();
  Eigen::MatrixXd table(counts.rows(), r);
  for (Eigen::Index j = 0; j < counts.rows(); ++j) {
    const double nj = counts.row(j).sum();
    const double denom = nj + alpha * static_cast<double>(r);
    if (denom <= 0.0) {
      if (!fallback) {
        throw Error(ErrorKind::EmptyFamily,
                    fmt::format("parent configuration {} has no data and alpha = 0", j));
      }
      table.row(j) = fallback->row(j);
      continue;
    }
    table.row(j) = (counts.row(j).array() + alpha) / denom;
  }
  return table;
}

namespace {

void require_catalog_nodes(const Dag& dag, const DiscretizedDataset& data) {
  if (dag.nodes() != data.catalog().names()) {
    throw Error(ErrorKind::InvalidArgument, "graph nodes must match the dataset catalog");
  }
}

std::vector<int> parent_cards(const Dag& dag, const VariableCatalog& cat, int v) {
  std::vector<int> out;
  for (int p : dag.parents(v)) out.push_back(cat[p].bins.bin_count());
  return out;
}

Cpt make_cpt(const Dag& dag, const VariableCatalog& cat, int v, Eigen::MatrixXd table) {
  return Cpt(cat[v].name, dag.parent_names(v), parent_cards(dag, cat, v), std::move(table));
}

}  // namespace

std::vector<Cpt> fit_parameters(const Dag& dag, const DiscretizedDataset& data, double alpha) {
  require_catalog_nodes(dag, data);
  const auto& cat = data.catalog();
  std::vector<Cpt> out;
  for (int v = 0; v < dag.size(); ++v) {
    try {
      out.push_back(make_cpt(dag, cat, v, estimate_table(family_counts(data, v, dag.parents(v)), alpha)));
    } catch (const Error& e) {
      throw e.with_context(fmt::format("node '{}'", cat[v].name));
    }
  }
  return out;
}

namespace {

struct EStep {
  std::vector<Eigen::MatrixXd> counts;
  double log_likelihood = 0.0;
};

EStep expectation(const BayesNet& net, const std::map<std::vector<int>, double>& patterns) {
  const auto& dag = net.dag();
  const int n = net.size();
  EStep out;
  for (int v = 0; v < n; ++v) {
    out.counts.push_back(Eigen::MatrixXd::Zero(net.cpt(v).row_count(), net.cpt(v).cardinality()));
  }
  for (const auto& [row, weight] : patterns) {
    out.log_likelihood += weight * log_evidence_probability(net, row);
    for (int v = 0; v < n; ++v) {
      std::vector<int> family = dag.parents(v);
      family.push_back(v);
      std::vector<int> hidden;
      for (int u : family) {
        if (row[u] == kMissing) hidden.push_back(u);
      }
      const auto& cpt = net.cpt(v);
      const auto& ps = dag.parents(v);
      std::vector<int> states(ps.size());
      if (hidden.empty()) {
        for (std::size_t i = 0; i < ps.size(); ++i) states[i] = row[ps[i]];
        out.counts[v](cpt.row_index(states), row[v]) += weight;
        continue;
      }
      const Factor post = joint_posterior(net, row, hidden);
      // post.vars() is `hidden` sorted; walk its assignments.
      std::vector<int> assign(n, kMissing);
      const auto& hv = post.vars();
      const auto& hc = post.cards();
      std::vector<int> digit(hv.size(), 0);
      for (Eigen::Index i = 0; i < post.size(); ++i) {
        for (std::size_t d = 0; d < hv.size(); ++d) assign[hv[d]] = digit[d];
        for (std::size_t k = 0; k < ps.size(); ++k) states[k] = row[ps[k]] == kMissing ? assign[ps[k]] : row[ps[k]];
        const int own = row[v] == kMissing ? assign[v] : row[v];
        out.counts[v](cpt.row_index(states), own) += weight * post.values()[i];
        for (int d = static_cast<int>(hv.size()) - 1; d >= 0; --d) {
          if (++digit[d] < hc[d]) break;
          digit[d] = 0;
        }
      }
    }
  }
  return out;
}

double log_prior(const std::vector<Cpt>& cpts, double alpha) {
  if (alpha == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& c : cpts) s += alpha * c.table().array().log().sum();
  return s;
}

}  // namespace

EmResult em_fit(const Dag& dag, const DiscretizedDataset& data, double alpha, double tol,
                int max_iters) {
  require_catalog_nodes(dag, data);
  if (alpha < 0) throw Error(ErrorKind::InvalidArgument, "alpha must be non-negative");
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be at least 1");
  const auto& cat = data.catalog();
  for (int v = 0; v < cat.size(); ++v) {
    if (data.missing_fraction(v) >= 1.0) {
      throw Error(ErrorKind::EmptyData, fmt::format("variable '{}' is never observed", cat[v].name));
    }
  }

  EmResult result;
  if (!data.has_missing()) {
    result.cpts = fit_parameters(dag, data, alpha);
    BayesNet net(cat, dag, result.cpts);
    double ll = 0.0;
    for (int r = 0; r < data.rows(); ++r) {
      std::vector<int> row(data.cells().row(r).begin(), data.cells().row(r).end());
      ll += log_evidence_probability(net, row);
    }
    result.log_likelihood.push_back(ll);
    result.objective.push_back(ll + log_prior(result.cpts, alpha));
    result.iterations = 0;
    return result;
  }

  std::map<std::vector<int>, double> patterns;
  for (int r = 0; r < data.rows(); ++r) {
    std::vector<int> row(data.cells().row(r).begin(), data.cells().row(r).end());
    patterns[row] += 1.0;
  }

  // Start from available-case estimates, smoothed so every observed pattern has mass.
  std::vector<Cpt> cpts;
  for (int v = 0; v < dag.size(); ++v) {
    cpts.push_back(make_cpt(dag, cat, v,
                            estimate_table(family_counts(data, v, dag.parents(v)), std::max(alpha, 1.0))));
  }

  double previous = -std::numeric_limits<double>::infinity();
  result.converged = false;
  for (int it = 0; it < max_iters; ++it) {
    BayesNet net(cat, dag, cpts);
    const EStep e = expectation(net, patterns);
    const double objective = e.log_likelihood + log_prior(cpts, alpha);
    result.log_likelihood.push_back(e.log_likelihood);
    result.objective.push_back(objective);
    result.iterations = it + 1;
    if (it > 0 && objective - previous < tol) {
      result.converged = true;
      break;
    }
    previous = objective;
    std::vector<Cpt> next;
    for (int v = 0; v < dag.size(); ++v) {
      const Eigen::MatrixXd old = cpts[v].table();
      next.push_back(make_cpt(dag, cat, v, estimate_table(e.counts[v], alpha, &old)));
    }
    if (it + 1 == max_iters) break;
    cpts = std::move(next);
  }
  if (!result.converged) {
    spdlog::warn("EM stopped after {} iterations without converging", result.iterations);
  }
  result.cpts = std::move(cpts);
  return result;
}

}  // namespace cornbn
