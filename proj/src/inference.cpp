#include "cornbn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

std::vector<int> evidence_vector(const BayesNet& net, const EvidenceSet& evidence) {
  std::vector<int> observed(net.size(), kMissing);
  for (const auto& [name, bin] : evidence.assignments()) {
    const int v = net.catalog().index_of(name);
    if (bin < 0 || bin >= net.catalog()[v].bins.bin_count()) {
      throw Error(ErrorKind::BinOutOfRange, fmt::format("bin {} invalid for '{}'", bin, name));
    }
    observed[v] = bin;
  }
  return observed;
}

namespace {

std::vector<int> relevant_nodes(const BayesNet& net, std::span<const int> observed,
                                const std::vector<int>& keep) {
  std::vector<int> roots = keep;
  for (int v = 0; v < net.size(); ++v) {
    if (observed[v] != kMissing) roots.push_back(v);
  }
  return net.dag().ancestors_of(roots);
}

void check_observed(const BayesNet& net, std::span<const int> observed) {
  if (static_cast<int>(observed.size()) != net.size()) {
    throw Error(ErrorKind::InvalidArgument, "evidence vector has wrong length");
  }
}

}  // namespace

std::vector<int> hidden_variables(const BayesNet& net, std::span<const int> observed,
                                  const std::vector<int>& keep) {
  check_observed(net, observed);
  std::vector<int> hidden;
  for (int v : relevant_nodes(net, observed, keep)) {
    if (observed[v] == kMissing && std::find(keep.begin(), keep.end(), v) == keep.end()) {
      hidden.push_back(v);
    }
  }
  return hidden;
}

std::vector<int> min_fill_order(const std::vector<std::vector<int>>& scopes,
                                const std::vector<int>& hidden) {
  std::set<int> all;
  for (const auto& s : scopes) all.insert(s.begin(), s.end());
  all.insert(hidden.begin(), hidden.end());
  const int n = all.empty() ? 0 : *all.rbegin() + 1;
  std::vector<std::set<int>> adj(n);
  for (const auto& s : scopes) {
    for (int a : s) {
      for (int b : s) {
        if (a != b) adj[a].insert(b);
      }
    }
  }
  std::set<int> remaining(hidden.begin(), hidden.end());
  std::vector<int> order;
  while (!remaining.empty()) {
    int best = -1;
    long best_fill = std::numeric_limits<long>::max();
    for (int v : remaining) {
      long fill = 0;
      for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
        for (auto b = std::next(a); b != adj[v].end(); ++b) {
          if (!adj[*a].count(*b)) ++fill;
        }
      }
      if (fill < best_fill) {
        best_fill = fill;
        best = v;
      }
    }
    for (int a : adj[best]) {
      for (int b : adj[best]) {
        if (a != b) adj[a].insert(b);
      }
      adj[a].erase(best);
    }
    adj[best].clear();
    remaining.erase(best);
    order.push_back(best);
  }
  return order;
}

namespace {

// Divide by the maximum entry; returns ln(max) or -inf for an all-zero factor.
double rescale(Factor& f) {
  const double m = f.values().maxCoeff();
  if (!(m > 0.0)) return -std::numeric_limits<double>::infinity();
  f.values() /= m;
  return std::log(m);
}

}  // namespace

EliminationResult eliminate(const BayesNet& net, std::span<const int> observed,
                            const std::vector<int>& keep, const EliminationOrder& order) {
  check_observed(net, observed);
  for (int k : keep) {
    if (k < 0 || k >= net.size()) throw Error(ErrorKind::UnknownVariable, "query index out of range");
    if (observed[k] != kMissing) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("'{}' is both queried and observed", net.catalog()[k].name));
    }
  }
  const auto relevant = relevant_nodes(net, observed, keep);
  std::vector<Factor> factors;
  EliminationResult result;
  for (int v : relevant) {
    Factor f = net.family_factor(v);
    for (int u : std::vector<int>(f.vars())) {
      if (observed[u] != kMissing) f = reduce(f, u, observed[u]);
    }
    if (f.vars().empty()) {
      result.log_scale += f.values()[0] > 0 ? std::log(f.values()[0])
                                            : -std::numeric_limits<double>::infinity();
    } else {
      factors.push_back(std::move(f));
    }
  }

  std::vector<int> hidden = hidden_variables(net, observed, keep);
  std::vector<int> elim;
  if (order) {
    elim = *order;
    auto a = elim;
    auto b = hidden;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      throw Error(ErrorKind::InvalidArgument, "elimination order must list exactly the hidden variables");
    }
  } else {
    std::vector<std::vector<int>> scopes;
    for (const auto& f : factors) scopes.push_back(f.vars());
    elim = min_fill_order(scopes, hidden);
  }

  for (int var : elim) {
    Factor joint;
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (f.contains(var)) {
        joint = product(joint, f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    joint = sum_out(joint, var);
    result.log_scale += rescale(joint);
    rest.push_back(std::move(joint));
    factors = std::move(rest);
  }

  Factor joint;
  for (const auto& f : factors) joint = product(joint, f);
  result.log_scale += rescale(joint);
  // Kept variables that never entered a factor cannot occur (each kept node
  // contributes its own CPT), but scalar-only results still need a scope.
  result.factor = std::move(joint);
  return result;
}

Eigen::VectorXd posterior(const BayesNet& net, std::span<const int> observed, int query,
                          const EliminationOrder& order) {
  auto res = eliminate(net, observed, {query}, order);
  const double mass = res.factor.values().sum();
  if (!std::isfinite(res.log_scale) || !(mass >= kImpossibleMass)) {
    throw Error(ErrorKind::ImpossibleEvidence, "evidence has zero probability under the model");
  }
  return res.factor.values() / mass;
}

Posterior posterior(const BayesNet& net, const EvidenceSet& evidence, const std::string& query,
                    const EliminationOrder& order) {
  const int q = net.catalog().index_of(query);
  if (evidence.contains(query)) {
    throw Error(ErrorKind::InvalidEvidence, fmt::format("query '{}' is part of the evidence", query));
  }
  return {query, posterior(net, evidence_vector(net, evidence), q, order)};
}

Factor joint_posterior(const BayesNet& net, std::span<const int> observed, std::vector<int> vars) {
  std::sort(vars.begin(), vars.end());
  auto res = eliminate(net, observed, vars);
  const double mass = res.factor.values().sum();
  if (!std::isfinite(res.log_scale) || !(mass >= kImpossibleMass)) {
    throw Error(ErrorKind::ImpossibleEvidence, "evidence has zero probability under the model");
  }
  res.factor.values() /= mass;
  return res.factor;
}

double log_evidence_probability(const BayesNet& net, std::span<const int> observed) {
  auto res = eliminate(net, observed, {});
  const double mass = res.factor.values().sum();
  if (!(mass > 0.0)) return -std::numeric_limits<double>::infinity();
  return res.log_scale + std::log(mass);
}

double expected_value(const Eigen::VectorXd& probs, const std::vector<double>& bin_means) {
  if (probs.size() != static_cast<Eigen::Index>(bin_means.size())) {
    throw Error(ErrorKind::InvalidArgument, "posterior and bin means differ in length");
  }
  double y = 0.0;
  for (Eigen::Index n = 0; n < probs.size(); ++n) y += probs[n] * bin_means[n];
  return y;
}

YieldForecast expected_yield(const BayesNet& net, const EvidenceSet& evidence) {
  const auto& target = net.catalog().target();
  if (!target.bins.bin_means()) {
    throw Error(ErrorKind::MissingBinMeans, fmt::format("target '{}' has no bin means", target.name));
  }
  if (evidence.contains(target.name)) {
    throw Error(ErrorKind::InvalidEvidence,
                fmt::format("target '{}' cannot be evidence for a forecast", target.name));
  }
  YieldForecast out;
  out.posterior = posterior(net, evidence, target.name);
  out.expected_yield = expected_value(out.posterior.probs, *target.bins.bin_means());
  out.evidence_used = evidence;
  return out;
}

double strength_of_influence(const BayesNet& net, const std::string& parent,
                             const std::string& child, const DiscretizedDataset* data) {
  const auto& dag = net.dag();
  const int p = dag.index_of(parent);
  const int c = dag.index_of(child);
  if (!dag.has_edge(p, c)) {
    throw Error(ErrorKind::UnknownEdge, fmt::format("no edge {} -> {}", parent, child));
  }
  const auto& cpt = net.cpt(c);
  const auto& parents = dag.parents(c);
  const int pos = static_cast<int>(std::find(parents.begin(), parents.end(), p) - parents.begin());

  // Other-parent configurations in mixed radix over the remaining parents.
  std::vector<int> other_cards;
  std::vector<int> other_vars;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (static_cast<int>(i) == pos) continue;
    other_cards.push_back(cpt.parent_cards()[i]);
    other_vars.push_back(parents[i]);
  }
  long configs = 1;
  for (int k : other_cards) configs *= k;
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(configs);
  if (data) {
    for (int r = 0; r < data->rows(); ++r) {
      long idx = 0;
      bool complete = true;
      for (std::size_t i = 0; i < other_vars.size(); ++i) {
        const int s = data->at(r, other_vars[i]);
        if (s == kMissing) {
          complete = false;
          break;
        }
        idx = idx * other_cards[i] + s;
      }
      if (complete) weights[idx] += 1.0;
    }
  }
  if (weights.sum() <= 0.0) weights.setOnes();
  weights /= weights.sum();

  const int parent_card = cpt.parent_cards()[pos];
  double strength = 0.0;
  std::vector<int> states(parents.size());
  for (long cfg = 0; cfg < configs; ++cfg) {
    long rem = cfg;
    for (int i = static_cast<int>(other_cards.size()) - 1; i >= 0; --i) {
      const int slot = i < pos ? i : i + 1;
      states[slot] = static_cast<int>(rem % other_cards[i]);
      rem /= other_cards[i];
    }
    double worst = 0.0;
    for (int s = 0; s < parent_card; ++s) {
      states[pos] = s;
      const Eigen::VectorXd a = cpt.table().row(cpt.row_index(states));
      for (int t = s + 1; t < parent_card; ++t) {
        states[pos] = t;
        const Eigen::VectorXd b = cpt.table().row(cpt.row_index(states));
        worst = std::max(worst, 0.5 * (a - b).cwiseAbs().sum());
      }
      states[pos] = s;
    }
    strength += weights[cfg] * worst;
  }
  return std::clamp(strength, 0.0, 1.0);
}

}  // namespace cornbn
