#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cornbn/bayes_net.hpp"
#include "cornbn/dataset.hpp"
#include "cornbn/evidence.hpp"

namespace cornbn {

inline constexpr double kImpossibleMass = 1e-12;

struct Posterior {
  std::string variable;
  Eigen::VectorXd probs;
};

struct YieldForecast {
  Posterior posterior;
  double expected_yield = 0.0;  // bu/ac
  EvidenceSet evidence_used;
};

/// Per-variable observed bin (kMissing when unobserved), catalog order.
std::vector<int> evidence_vector(const BayesNet& net, const EvidenceSet& evidence);

/// Variables eliminated in the order given; must name exactly the hidden
/// relevant variables when supplied, otherwise a min-fill order is used.
using EliminationOrder = std::optional<std::vector<int>>;

struct EliminationResult {
  Factor factor;          // unnormalized joint over the kept variables, rescaled
  double log_scale = 0;   // ln of the factor's true scale
};

/// Variable elimination restricted to the ancestors of the kept and observed
/// variables. Intermediate factors are rescaled to a unit maximum and the
/// scale is carried in log space.
EliminationResult eliminate(const BayesNet& net, std::span<const int> observed,
                            const std::vector<int>& keep, const EliminationOrder& order = {});

/// Min-fill order over the interaction graph of `scopes`, eliminating `hidden`.
std::vector<int> min_fill_order(const std::vector<std::vector<int>>& scopes,
                                const std::vector<int>& hidden);

/// Hidden variables the eliminator would remove for this query.
std::vector<int> hidden_variables(const BayesNet& net, std::span<const int> observed,
                                  const std::vector<int>& keep);

/// Exact P(query | evidence). Throws ImpossibleEvidence when the evidence
/// mass is below kImpossibleMass after rescaling.
Posterior posterior(const BayesNet& net, const EvidenceSet& evidence, const std::string& query,
                    const EliminationOrder& order = {});
Eigen::VectorXd posterior(const BayesNet& net, std::span<const int> observed, int query,
                          const EliminationOrder& order = {});

/// Normalized joint posterior over `vars` (ascending) given observed cells.
Factor joint_posterior(const BayesNet& net, std::span<const int> observed, std::vector<int> vars);

/// ln P(observed cells). Returns -inf for impossible evidence.
double log_evidence_probability(const BayesNet& net, std::span<const int> observed);

/// Posterior over the target weighted by its per-bin training means.
/// The target may not be part of the evidence.
YieldForecast expected_yield(const BayesNet& net, const EvidenceSet& evidence);

double expected_value(const Eigen::VectorXd& probs, const std::vector<double>& bin_means);

/// Average over the child's other-parent configurations of the largest
/// total-variation distance between child rows for two states of `parent`.
/// Configurations are weighted by their empirical frequency in `data`, or
/// uniformly when no data (or no usable row) is given.
double strength_of_influence(const BayesNet& net, const std::string& parent,
                             const std::string& child, const DiscretizedDataset* data = nullptr);

}  // namespace cornbn
