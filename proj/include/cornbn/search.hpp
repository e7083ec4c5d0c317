#pragma once

#include <cstdint>

#include "cornbn/constraints.hpp"
#include "cornbn/dataset.hpp"
#include "cornbn/score.hpp"

namespace cornbn {

struct SearchConfig {
  int restarts = 5;
  int max_parents = 4;
  std::uint64_t rng_seed = 0;
  int tabu_length = 10;
  int max_iters_per_restart = 500;
};

/// Constrained BIC hill climbing over {add, delete, reverse} moves.
///
/// Each restart begins from the forced edges (restarts after the first add a
/// seeded random set of legal edges), then takes the best non-tabu move per
/// step. Recently undone moves stay tabu for `tabu_length` steps, and up to
/// `tabu_length` consecutive non-improving moves are tolerated before the
/// restart ends. Ties within 1e-9 go to add < delete < reverse, then to the
/// lexicographically smallest (parent, child) names. Restart r draws from
/// seed rng_seed + r; the best restart wins, earliest on ties.
ScoredStructure learn_structure(const DiscretizedDataset& data, const KnowledgeConstraints& kc,
                                const SearchConfig& config = {});

}  // namespace cornbn
