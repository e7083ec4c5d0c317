#include "cornbn/search.hpp"

#include <bit>
#include <deque>
#include <map>
#include <limits>
#include <random>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cornbn/errors.hpp"

namespace cornbn {

namespace {

using Mask = std::uint64_t;

enum class Op { Add = 0, Delete = 1, Reverse = 2 };

struct Move {
  Op op;
  int from;
  int to;
  friend bool operator==(const Move&, const Move&) = default;
};

class Searcher {
 public:
  Searcher(const DiscretizedDataset& data, const KnowledgeConstraints& kc, const SearchConfig& cfg)
      : data_(data), cfg_(cfg), n_(data.cols()), cache_(n_) {
    const auto& cat = data.catalog();
    names_ = cat.names();
    allowed_.assign(n_, std::vector<char>(n_, 0));
    forced_.assign(n_, 0);
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) allowed_[u][v] = kc.allows(names_[u], names_[v], cat);
    }
    for (const auto& [p, c] : kc.forced()) forced_[cat.index_of(c)] |= Mask{1} << cat.index_of(p);
  }

  double family(int v, Mask parents) {
    auto& cache = cache_[v];
    if (auto it = cache.find(parents); it != cache.end()) return it->second;
    std::vector<int> ps;
    for (int u = 0; u < n_; ++u) {
      if (parents >> u & 1) ps.push_back(u);
    }
    const double s = family_bic(family_counts(data_, v, ps));
    cache.emplace(parents, s);
    return s;
  }

  bool reaches(const std::vector<Mask>& parents, int from, int to) const {
    // Walk child edges from `from`.
    Mask seen = Mask{1} << from;
    Mask frontier = seen;
    while (frontier) {
      Mask next = 0;
      for (int v = 0; v < n_; ++v) {
        if (!(seen >> v & 1) && (parents[v] & frontier)) next |= Mask{1} << v;
      }
      if (next >> to & 1) return true;
      seen |= next;
      frontier = next;
    }
    return false;
  }

  double total(const std::vector<Mask>& parents) {
    double s = 0.0;
    for (int v = 0; v < n_; ++v) s += family(v, parents[v]);
    return s;
  }

  bool legal_add(const std::vector<Mask>& parents, int u, int v) const {
    return u != v && allowed_[u][v] && !(parents[v] >> u & 1) && !(parents[u] >> v & 1) &&
           std::popcount(parents[v]) < cfg_.max_parents && !reaches(parents, v, u);
  }

  std::vector<Mask> perturbed_start(std::uint64_t seed) const {
    std::vector<Mask> parents = forced_;
    std::mt19937_64 rng(seed);
    const int attempts = 2 * n_;
    for (int a = 0; a < attempts; ++a) {
      const int u = static_cast<int>(rng() % static_cast<std::uint64_t>(n_));
      const int v = static_cast<int>(rng() % static_cast<std::uint64_t>(n_));
      if (legal_add(parents, u, v)) parents[v] |= Mask{1} << u;
    }
    return parents;
  }

  std::pair<std::vector<Mask>, double> climb(std::vector<Mask> parents) {
    std::vector<Mask> best_state = parents;
    double current = total(parents);
    double best_score = current;
    std::deque<Move> tabu;
    int stale = 0;
    constexpr double eps = 1e-9;

    auto key_less = [&](const Move& a, const Move& b) {
      return std::tie(a.op, names_[a.from], names_[a.to]) < std::tie(b.op, names_[b.from], names_[b.to]);
    };

    for (int iter = 0; iter < cfg_.max_iters_per_restart; ++iter) {
      bool found = false;
      Move best{Op::Add, 0, 0};
      double best_delta = -std::numeric_limits<double>::infinity();
      auto consider = [&](const Move& m, double delta) {
        for (const auto& t : tabu) {
          if (t == m) return;
        }
        if (!found || delta > best_delta + eps ||
            (std::abs(delta - best_delta) <= eps && key_less(m, best))) {
          found = true;
          best = m;
          best_delta = delta;
        }
      };
      for (int v = 0; v < n_; ++v) {
        const double base_v = family(v, parents[v]);
        for (int u = 0; u < n_; ++u) {
          if (u == v) continue;
          const Mask bit = Mask{1} << u;
          if (parents[v] & bit) {
            if (forced_[v] & bit) continue;
            const double del = family(v, parents[v] & ~bit) - base_v;
            consider({Op::Delete, u, v}, del);
            // Reverse u->v into v->u.
            if (allowed_[v][u] && std::popcount(parents[u]) < cfg_.max_parents) {
              auto trial = parents;
              trial[v] &= ~bit;
              if (!reaches(trial, u, v)) {
                const double rev = del + family(u, parents[u] | (Mask{1} << v)) - family(u, parents[u]);
                consider({Op::Reverse, u, v}, rev);
              }
            }
          } else if (legal_add(parents, u, v)) {
            consider({Op::Add, u, v}, family(v, parents[v] | bit) - base_v);
          }
        }
      }
      if (!found) break;
      const bool improving = best_delta > eps;
      if (!improving && (cfg_.tabu_length == 0 || stale >= cfg_.tabu_length)) break;

      const Mask bit = Mask{1} << best.from;
      Move inverse = best;
      switch (best.op) {
        case Op::Add:
          parents[best.to] |= bit;
          inverse = {Op::Delete, best.from, best.to};
          break;
        case Op::Delete:
          parents[best.to] &= ~bit;
          inverse = {Op::Add, best.from, best.to};
          break;
        case Op::Reverse:
          parents[best.to] &= ~bit;
          parents[best.from] |= Mask{1} << best.to;
          inverse = {Op::Reverse, best.to, best.from};
          break;
      }
      current += best_delta;
      if (cfg_.tabu_length > 0) {
        tabu.push_back(inverse);
        while (static_cast<int>(tabu.size()) > cfg_.tabu_length) tabu.pop_front();
      }
      if (current > best_score + eps) {
        best_score = current;
        best_state = parents;
        stale = 0;
      } else {
        ++stale;
      }
    }
    return {best_state, total(best_state)};
  }

  Dag to_dag(const std::vector<Mask>& parents) const {
    std::vector<std::pair<std::string, std::string>> edges;
    for (int v = 0; v < n_; ++v) {
      for (int u = 0; u < n_; ++u) {
        if (parents[v] >> u & 1) edges.emplace_back(names_[u], names_[v]);
      }
    }
    return Dag(names_, edges);
  }

  const std::vector<Mask>& forced() const { return forced_; }

 private:
  const DiscretizedDataset& data_;
  SearchConfig cfg_;
  int n_;
  std::vector<std::string> names_;
  std::vector<std::vector<char>> allowed_;
  std::vector<Mask> forced_;
  std::vector<std::unordered_map<Mask, double>> cache_;
};

}  // namespace

ScoredStructure learn_structure(const DiscretizedDataset& data, const KnowledgeConstraints& kc,
                                const SearchConfig& config) {
  if (data.rows() == 0) throw Error(ErrorKind::EmptyData, "cannot learn from an empty dataset");
  if (config.restarts < 1 || config.max_parents < 1 || config.tabu_length < 0 ||
      config.max_iters_per_restart < 0) {
    throw Error(ErrorKind::InvalidArgument, "invalid search configuration");
  }
  const auto& cat = data.catalog();
  if (cat.size() > 64) throw Error(ErrorKind::InvalidArgument, "structure search supports at most 64 variables");
  kc.check_names(cat);

  std::map<std::string, int> forced_parents;
  for (const auto& [p, c] : kc.forced()) {
    if (kc.tier_of(p, cat) > kc.tier_of(c, cat)) {
      throw Error(ErrorKind::InfeasibleConstraints,
                  fmt::format("forced edge {} -> {} runs from a later tier to an earlier one", p, c));
    }
    if (++forced_parents[c] > config.max_parents) {
      throw Error(ErrorKind::InfeasibleConstraints,
                  fmt::format("'{}' has more forced parents than max_parents = {}", c, config.max_parents));
    }
  }

  Searcher searcher(data, kc, config);
  std::vector<std::uint64_t> best;
  double best_score = -std::numeric_limits<double>::infinity();
  Dag best_dag;
  for (int r = 0; r < config.restarts; ++r) {
    auto start = r == 0 ? searcher.forced() : searcher.perturbed_start(config.rng_seed + r);
    auto [state, score] = searcher.climb(std::move(start));
    spdlog::debug("restart {}: BIC {:.6f}", r, score);
    if (score > best_score + 1e-9) {
      best_score = score;
      best_dag = searcher.to_dag(state);
    }
  }
  return bic_score(best_dag, data);
}

}  // namespace cornbn
