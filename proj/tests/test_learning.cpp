#include <doctest.h>

#include <cmath>
#include <random>

#include "cornbn/errors.hpp"
#include "cornbn/inference.hpp"
#include "cornbn/parameters.hpp"
#include "cornbn/score.hpp"
#include "cornbn/search.hpp"
#include "support/testkit.hpp"

using namespace cornbn;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::IoError;
}

VariableCatalog binary_catalog(int n) {
  std::vector<VariableSpec> specs;
  for (int i = 0; i < n; ++i) {
    specs.push_back({testkit::node_name(i), i == n - 1 ? VariableKind::Target : VariableKind::Raw, 0,
                     testkit::ladder(2, i == n - 1)});
  }
  return VariableCatalog(specs);
}

DiscretizedDataset from_rows(const VariableCatalog& cat, const std::vector<std::vector<int>>& rows) {
  DiscretizedDataset::Cells cells(rows.size(), cat.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < cat.size(); ++c) cells(r, c) = rows[r][c];
  }
  return DiscretizedDataset(cat, cells);
}

std::vector<std::vector<int>> to_rows(const DiscretizedDataset& d) {
  std::vector<std::vector<int>> rows(d.rows(), std::vector<int>(d.cols()));
  for (int r = 0; r < d.rows(); ++r) {
    for (int c = 0; c < d.cols(); ++c) rows[r][c] = d.at(r, c);
  }
  return rows;
}

double naive_total(const Dag& dag, const DiscretizedDataset& d) {
  const auto rows = to_rows(d);
  const auto cards = d.catalog().cardinalities();
  double s = 0.0;
  for (int v = 0; v < dag.size(); ++v) s += testkit::naive_family_bic(rows, v, dag.parents(v), cards);
  return s;
}

}  // namespace

TEST_CASE("bic single binary node closed form") {
  auto cat = VariableCatalog({{"X0", VariableKind::Target, 0, testkit::ladder(2, true)}});
  auto d = from_rows(cat, {{0}, {0}, {0}, {1}});
  auto s = bic_score(Dag(cat.names()), d);
  const double expect = 3.0 * std::log(3.0 / 4.0) + std::log(1.0 / 4.0) - std::log(4.0) / 2.0;
  CHECK(std::abs(s.score - expect) <= 1e-12);
  CHECK(kind_of([&] { bic_score(Dag(cat.names()), d.subset({})); }) == ErrorKind::EmptyData);
}

TEST_CASE("bic prefers the empty graph for independent data") {
  auto cat = binary_catalog(2);
  std::mt19937_64 rng(1);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 5000; ++i) rows.push_back({testkit::unit(rng) < 0.4, testkit::unit(rng) < 0.7});
  auto d = from_rows(cat, rows);
  Dag empty(cat.names());
  Dag edge = empty.add_edge(0, 1);
  const double se = bic_score(empty, d).score, sd = bic_score(edge, d).score;
  CHECK(se > sd);
  CHECK(se == doctest::Approx(naive_total(empty, d)).epsilon(1e-12));
  CHECK(sd == doctest::Approx(naive_total(edge, d)).epsilon(1e-12));
}

TEST_CASE("bic prefers the edge for a copied variable") {
  auto cat = binary_catalog(2);
  std::mt19937_64 rng(2);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 100; ++i) {
    const int a = testkit::unit(rng) < 0.5;
    rows.push_back({a, a});
  }
  auto d = from_rows(cat, rows);
  Dag empty(cat.names());
  Dag edge = empty.add_edge(0, 1);
  CHECK(bic_score(edge, d).score > bic_score(empty, d).score);
  CHECK(bic_score(edge, d).score == doctest::Approx(naive_total(edge, d)).epsilon(1e-12));
}

TEST_CASE("bic is decomposable and uses available cases") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto net = testkit::random_network(rng, {.min_nodes = 3, .max_nodes = 6});
    auto d = synthetic::sample(net, 300, trial);
    auto cells = d.cells();
    for (int r = 0; r < cells.rows(); ++r) {
      for (int c = 0; c < cells.cols(); ++c) {
        if (testkit::unit(rng) < 0.1) cells(r, c) = kMissing;
      }
    }
    DiscretizedDataset holey(d.catalog(), cells);
    auto s = bic_score(net.dag(), holey);
    const auto rows = to_rows(holey);
    const auto cards = holey.catalog().cardinalities();
    double total = 0.0;
    for (int v = 0; v < net.size(); ++v) {
      const double naive = testkit::naive_family_bic(rows, v, net.dag().parents(v), cards);
      CHECK(std::abs(s.per_node_scores[v] - naive) <= 1e-9 * std::max(1.0, std::abs(naive)));
      total += s.per_node_scores[v];
    }
    CHECK(std::abs(s.score - total) <= 1e-9 * std::abs(total));
    // Changing one family moves only that node's term.
    const int n = net.size();
    for (int p = 0; p < n; ++p) {
      for (int c = 0; c < n; ++c) {
        if (p == c || net.dag().has_edge(p, c) || net.dag().creates_cycle(p, c)) continue;
        auto s2 = bic_score(net.dag().add_edge(p, c), holey);
        for (int v = 0; v < n; ++v) {
          if (v != c) CHECK(s2.per_node_scores[v] == s.per_node_scores[v]);
        }
        p = c = n;
      }
    }
  }
}

TEST_CASE("independent extra parent lowers bic at N = 5000") {
  auto cat = binary_catalog(3);
  int lower = 0;
  for (int seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(100 + seed);
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 5000; ++i) {
      const int a = testkit::unit(rng) < 0.5;
      const int b = testkit::unit(rng) < (a ? 0.8 : 0.3);
      const int z = testkit::unit(rng) < 0.5;
      rows.push_back({a, z, b});
    }
    auto d = from_rows(cat, rows);
    Dag base = Dag(cat.names()).add_edge(0, 2);
    lower += bic_score(base.add_edge(1, 2), d).score < bic_score(base, d).score;
  }
  CHECK(lower >= 38);
}

TEST_CASE("learn_structure with every edge forbidden") {
  std::mt19937_64 rng(4);
  auto net = testkit::random_network(rng, {.min_nodes = 4, .max_nodes = 4, .edge_prob = 0.9});
  auto d = synthetic::sample(net, 500, 1);
  std::set<NamedEdge> all;
  for (const auto& a : d.catalog().names()) {
    for (const auto& b : d.catalog().names()) {
      if (a != b) all.emplace(a, b);
    }
  }
  auto s = learn_structure(d, KnowledgeConstraints(all, {}));
  CHECK(s.dag.edge_count() == 0);
  CHECK(s.score == doctest::Approx(naive_total(Dag(d.catalog().names()), d)).epsilon(1e-12));
}

TEST_CASE("learn_structure links a deterministic pair") {
  auto cat = binary_catalog(2);
  std::mt19937_64 rng(5);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 200; ++i) {
    const int a = testkit::unit(rng) < 0.5;
    rows.push_back({a, 1 - a});
  }
  auto d = from_rows(cat, rows);
  // All three two-node DAGs scored by the independent oracle.
  Dag empty(cat.names());
  const double e = naive_total(empty, d), f = naive_total(empty.add_edge(0, 1), d),
               b = naive_total(empty.add_edge(1, 0), d);
  CHECK(f > e);
  CHECK(b > e);
  auto s = learn_structure(d, {});
  CHECK(s.dag.edge_count() == 1);
  CHECK(s.score == doctest::Approx(std::max(f, b)).epsilon(1e-12));
}

TEST_CASE("learn_structure keeps forced edges and rejects infeasible ones") {
  std::mt19937_64 rng(6);
  auto net = testkit::random_network(rng, {.min_nodes = 5, .max_nodes = 5});
  auto d = synthetic::sample(net, 400, 2);
  KnowledgeConstraints kc({}, {{"X4", "X0"}});
  auto s = learn_structure(d, kc);
  CHECK(s.dag.has_edge("X4", "X0"));
  CHECK(constraints_check(s.dag, kc, d.catalog()).empty());

  CHECK(kind_of([&] {
          (void)learn_structure(d, KnowledgeConstraints({}, {{"X4", "X0"}}, {{"X4", 2}, {"X0", 1}}));
        }) == ErrorKind::InfeasibleConstraints);
  // Tiers taken from the catalog are checked by the search itself.
  std::vector<VariableSpec> specs = d.catalog().variables();
  specs[4].tier = 3;
  DiscretizedDataset tiered_data(VariableCatalog(specs), d.cells());
  CHECK(kind_of([&] { (void)learn_structure(tiered_data, kc); }) == ErrorKind::InfeasibleConstraints);
  KnowledgeConstraints crowded({}, {{"X1", "X0"}, {"X2", "X0"}, {"X3", "X0"}});
  SearchConfig cfg;
  cfg.max_parents = 2;
  CHECK(kind_of([&] { (void)learn_structure(d, crowded, cfg); }) == ErrorKind::InfeasibleConstraints);
  KnowledgeConstraints stray({{"X1", "Q"}}, {});
  CHECK(kind_of([&] { (void)learn_structure(d, stray); }) == ErrorKind::UnknownVariable);
}

TEST_CASE("learn_structure is deterministic and respects max_parents") {
  std::mt19937_64 rng(7);
  auto net = testkit::random_network(rng, {.min_nodes = 6, .max_nodes = 6, .edge_prob = 0.7});
  auto d = synthetic::sample(net, 1000, 3);
  SearchConfig cfg;
  cfg.rng_seed = 42;
  cfg.max_parents = 2;
  auto a = learn_structure(d, {}, cfg);
  auto b = learn_structure(d, {}, cfg);
  CHECK(a.dag == b.dag);
  CHECK(a.score == b.score);
  CHECK(a.per_node_scores == b.per_node_scores);
  for (int v = 0; v < a.dag.size(); ++v) CHECK(a.dag.parents(v).size() <= 2);
  CHECK(a.score == doctest::Approx(naive_total(a.dag, d)).epsilon(1e-12));
}

TEST_CASE("learn_structure output passes constraints_check on random constraints") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    auto net = testkit::random_network(rng, {.min_nodes = 3, .max_nodes = 6});
    auto d = synthetic::sample(net, 200, trial);
    const auto names = d.catalog().names();
    const int n = static_cast<int>(names.size());
    std::map<std::string, int> tiers;
    for (const auto& nm : names) {
      if (testkit::unit(rng) < 0.6) tiers[nm] = testkit::uniform_int(rng, 0, 2);
    }
    std::set<NamedEdge> forbidden;
    for (int k = 0; k < n; ++k) {
      const int a = testkit::uniform_int(rng, 0, n - 1), b = testkit::uniform_int(rng, 0, n - 1);
      if (a != b) forbidden.emplace(names[a], names[b]);
    }
    KnowledgeConstraints kc(forbidden, {}, tiers);
    SearchConfig cfg;
    cfg.rng_seed = trial;
    cfg.restarts = 2;
    auto s = learn_structure(d, kc, cfg);
    CHECK(constraints_check(s.dag, kc, d.catalog()).empty());
  }
}

TEST_CASE("fit_parameters laplace arithmetic") {
  auto cat = VariableCatalog({{"X0", VariableKind::Target, 0, testkit::ladder(2, true)}});
  auto d = from_rows(cat, {{0}, {0}, {0}, {1}});
  auto cpts = fit_parameters(Dag(cat.names()), d, 1.0);
  CHECK(cpts[0].table()(0, 0) == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK(cpts[0].table()(0, 1) == doctest::Approx(2.0 / 6.0).epsilon(1e-15));

  auto cat2 = binary_catalog(2);
  auto d2 = from_rows(cat2, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}});
  Dag edge = Dag(cat2.names()).add_edge(0, 1);
  auto smoothed = fit_parameters(edge, d2, 1.0);
  CHECK(smoothed[1].table()(1, 0) == 0.5);
  CHECK(smoothed[1].table()(1, 1) == 0.5);
  CHECK(kind_of([&] { (void)fit_parameters(edge, d2, 0.0); }) == ErrorKind::EmptyFamily);
  auto mle = fit_parameters(Dag(cat2.names()), d2, 0.0);
  CHECK(mle[1].table()(0, 0) == 1.0);
  CHECK(mle[1].table()(0, 1) == 0.0);
}

TEST_CASE("em_fit equals fit_parameters on complete data") {
  std::mt19937_64 rng(9);
  auto net = testkit::random_network(rng, {.min_nodes = 4, .max_nodes = 4});
  auto d = synthetic::sample(net, 300, 4);
  auto em = em_fit(net.dag(), d, 1.0);
  auto direct = fit_parameters(net.dag(), d, 1.0);
  for (int v = 0; v < net.size(); ++v) CHECK(em.cpts[v] == direct[v]);
}

TEST_CASE("em_fit log-likelihood never decreases") {
  auto cat = VariableCatalog({{"A", VariableKind::Raw, 0, testkit::ladder(2)},
                              {"B", VariableKind::Target, 0, testkit::ladder(3, true)}});
  Dag chain(cat.names(), {{"A", "B"}});
  std::mt19937_64 rng(10);
  DiscretizedDataset::Cells cells(100, 2);
  for (int r = 0; r < 100; ++r) {
    cells(r, 0) = testkit::unit(rng) < 0.3;
    cells(r, 1) = cells(r, 0) ? testkit::uniform_int(rng, 1, 2) : testkit::uniform_int(rng, 0, 1);
  }
  cells(17, 0) = kMissing;
  cells(17, 1) = kMissing;
  for (double alpha : {0.0, 1.0}) {
    auto em = em_fit(chain, DiscretizedDataset(cat, cells), alpha);
    const auto& seq = alpha == 0.0 ? em.log_likelihood : em.objective;
    for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i] >= seq[i - 1] - 1e-9);
  }
}

TEST_CASE("em_fit log-likelihood matches inference") {
  std::mt19937_64 rng(12);
  auto net = testkit::random_network(rng, {.min_nodes = 4, .max_nodes = 4});
  auto d = synthetic::sample(net, 200, 5);
  auto cells = d.cells();
  for (int r = 0; r < cells.rows(); ++r) {
    if (r % 3 == 0) cells(r, r % cells.cols()) = kMissing;
  }
  DiscretizedDataset holey(d.catalog(), cells);
  auto em = em_fit(net.dag(), holey, 0.0, 1e-6, 3);
  // The reported value for the final parameters equals the summed per-row
  // evidence log-probability computed by brute force.
  BayesNet fitted(net.catalog(), net.dag(), em.cpts);
  double ll = 0.0;
  for (int r = 0; r < holey.rows(); ++r) {
    std::vector<int> ev(holey.cols());
    for (int c = 0; c < holey.cols(); ++c) ev[c] = holey.at(r, c);
    ll += std::log(testkit::enumerate_evidence_probability(fitted, ev));
  }
  REQUIRE_FALSE(em.log_likelihood.empty());
  const double last = em.log_likelihood.back();
  // log_likelihood[t] is evaluated at the parameters entering iteration t, so
  // the final parameters score at least as well.
  CHECK(ll >= last - 1e-9);
}

TEST_CASE("em_fit recovers a cpt with half the child missing") {
  auto cat = VariableCatalog({{"A", VariableKind::Raw, 0, testkit::ladder(2)},
                              {"B", VariableKind::Target, 0, testkit::ladder(2, true)}});
  Dag edge(cat.names(), {{"A", "B"}});
  std::mt19937_64 rng(11);
  const double p_b[2] = {0.2, 0.75};
  DiscretizedDataset::Cells cells(5000, 2);
  for (int r = 0; r < 5000; ++r) {
    cells(r, 0) = testkit::unit(rng) < 0.4;
    cells(r, 1) = testkit::unit(rng) < p_b[cells(r, 0)];
    if (testkit::unit(rng) < 0.5) cells(r, 1) = kMissing;
  }
  auto em = em_fit(edge, DiscretizedDataset(cat, cells), 1.0);
  CHECK(std::abs(em.cpts[1].table()(0, 1) - p_b[0]) <= 0.05);
  CHECK(std::abs(em.cpts[1].table()(1, 1) - p_b[1]) <= 0.05);
}
