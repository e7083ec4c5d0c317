#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cornbn/errors.hpp"
#include "cornbn/factor.hpp"
#include "cornbn/inference.hpp"
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

Cpt table_cpt(const std::string& node, std::vector<std::string> parents, std::vector<int> pc,
              std::vector<std::vector<double>> rows) {
  Eigen::MatrixXd t(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < rows[r].size(); ++k) t(r, k) = rows[r][k];
  }
  return Cpt(node, std::move(parents), std::move(pc), t);
}

// A -> B -> C with C the target.
BayesNet chain() {
  VariableCatalog cat({{"A", VariableKind::Raw, 0, testkit::ladder(2)},
                       {"B", VariableKind::Raw, 0, testkit::ladder(3)},
                       {"C", VariableKind::Target, 0, BinScheme({131, 149, 178}, std::vector<double>{100, 140, 160, 200})}});
  Dag dag(cat.names(), {{"A", "B"}, {"B", "C"}});
  return BayesNet(cat, dag,
                  {table_cpt("A", {}, {}, {{0.3, 0.7}}),
                   table_cpt("B", {"A"}, {2}, {{0.2, 0.5, 0.3}, {0.6, 0.1, 0.3}}),
                   table_cpt("C", {"B"}, {3},
                             {{0.1, 0.2, 0.3, 0.4}, {0.25, 0.25, 0.25, 0.25}, {0.7, 0.1, 0.1, 0.1}})});
}

BayesNet parent_child(const std::vector<std::vector<double>>& child_rows, int parent_card) {
  const int child_card = static_cast<int>(child_rows[0].size());
  VariableCatalog cat({{"P", VariableKind::Raw, 0, testkit::ladder(parent_card)},
                       {"C", VariableKind::Target, 0, testkit::ladder(child_card, true)}});
  std::vector<double> prior(parent_card, 1.0 / parent_card);
  return BayesNet(cat, Dag(cat.names(), {{"P", "C"}}),
                  {table_cpt("P", {}, {}, {prior}), table_cpt("C", {"P"}, {parent_card}, child_rows)});
}

}  // namespace

TEST_CASE("factor product, sum_out and reduce") {
  Factor a({0, 1}, {2, 2}, (Eigen::VectorXd(4) << 1, 2, 3, 4).finished());
  Factor b({1, 2}, {2, 3}, (Eigen::VectorXd(6) << 1, 2, 3, 4, 5, 6).finished());
  Factor ab = a * b;
  CHECK(ab.vars() == std::vector<int>{0, 1, 2});
  // entry (x0, x1, x2) = a(x0, x1) * b(x1, x2)
  for (int x0 = 0; x0 < 2; ++x0) {
    for (int x1 = 0; x1 < 2; ++x1) {
      for (int x2 = 0; x2 < 3; ++x2) {
        CHECK(ab.values()[(x0 * 2 + x1) * 3 + x2] == a.values()[x0 * 2 + x1] * b.values()[x1 * 3 + x2]);
      }
    }
  }
  Factor s = sum_out(a, 0);
  CHECK(s.vars() == std::vector<int>{1});
  CHECK(s.values()[0] == 4.0);
  CHECK(s.values()[1] == 6.0);
  Factor r = reduce(a, 1, 1);
  CHECK(r.vars() == std::vector<int>{0});
  CHECK(r.values()[0] == 2.0);
  CHECK(r.values()[1] == 4.0);
  Factor f = Factor::from_layout({1, 0}, {2, 2}, (Eigen::VectorXd(4) << 1, 3, 2, 4).finished());
  CHECK(f.values() == a.values());
}

TEST_CASE("posterior examples") {
  auto net = chain();
  auto root = posterior(net, EvidenceSet(net.catalog(), {}), "A");
  CHECK(root.probs[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(root.probs[1] == doctest::Approx(0.7).epsilon(1e-14));
  auto row = posterior(net, EvidenceSet(net.catalog(), {{"B", 2}}), "C");
  for (int k = 0; k < 4; ++k) CHECK(std::abs(row.probs[k] - net.cpt(2).table()(2, k)) <= 1e-12);
  auto given_a = posterior(net, EvidenceSet(net.catalog(), {{"A", 1}}), "C");
  auto oracle = testkit::enumerate_posterior(net, {1, -1, -1}, 2);
  CHECK((given_a.probs - oracle).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(kind_of([&] { posterior(net, EvidenceSet(net.catalog(), {}), "Q"); }) == ErrorKind::UnknownVariable);
  CHECK(kind_of([&] { posterior(net, EvidenceSet(net.catalog(), {{"A", 0}}), "A"); }) == ErrorKind::InvalidEvidence);
}

TEST_CASE("posterior matches enumeration on random networks") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    auto net = testkit::random_network(rng);
    const int n = net.size();
    std::vector<int> ev(n, -1);
    for (int v = 0; v < n; ++v) {
      if (testkit::unit(rng) < 0.4) ev[v] = testkit::uniform_int(rng, 0, net.catalog()[v].bins.bin_count() - 1);
    }
    for (int q = 0; q < n; ++q) {
      if (ev[q] >= 0) continue;
      auto oracle = testkit::enumerate_posterior(net, ev, q);
      auto got = posterior(net, ev, q);
      CHECK((got - oracle).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(std::abs(got.sum() - 1.0) <= 1e-9);
      CHECK(got.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("elimination order does not change the posterior") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    auto net = testkit::random_network(rng, {.min_nodes = 4});
    const int n = net.size();
    std::vector<int> ev(n, -1);
    ev[0] = 0;
    const int q = n - 1;
    auto hidden = hidden_variables(net, ev, {q});
    auto base = posterior(net, ev, q);
    for (int k = 0; k < 3; ++k) {
      std::shuffle(hidden.begin(), hidden.end(), rng);
      auto other = posterior(net, ev, q, hidden);
      CHECK((base - other).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("impossible evidence") {
  VariableCatalog cat({{"A", VariableKind::Raw, 0, testkit::ladder(2)},
                       {"B", VariableKind::Target, 0, testkit::ladder(2, true)}});
  BayesNet net(cat, Dag(cat.names(), {{"A", "B"}}),
               {table_cpt("A", {}, {}, {{1.0, 0.0}}), table_cpt("B", {"A"}, {2}, {{0.5, 0.5}, {0.5, 0.5}})});
  CHECK(kind_of([&] { posterior(net, EvidenceSet(cat, {{"A", 1}}), "B"); }) == ErrorKind::ImpossibleEvidence);
  std::vector<int> ev{1, -1};
  CHECK(std::isinf(log_evidence_probability(net, ev)));
}

TEST_CASE("log evidence probability matches enumeration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto net = testkit::random_network(rng);
    std::vector<int> ev(net.size(), -1);
    for (int v = 0; v < net.size(); ++v) {
      if (testkit::unit(rng) < 0.5) ev[v] = testkit::uniform_int(rng, 0, net.catalog()[v].bins.bin_count() - 1);
    }
    const double oracle = std::log(testkit::enumerate_evidence_probability(net, ev));
    CHECK(std::abs(log_evidence_probability(net, ev) - oracle) <= 1e-10);
  }
}

TEST_CASE("expected yield formula") {
  Eigen::VectorXd uniform = Eigen::VectorXd::Constant(4, 0.25);
  const std::vector<double> means{100, 140, 160, 200};
  CHECK(expected_value(uniform, means) == 150.0);
  for (int k = 0; k < 4; ++k) CHECK(expected_value(Eigen::VectorXd::Unit(4, k), means) == means[k]);

  auto net = chain();
  auto f = expected_yield(net, EvidenceSet(net.catalog(), {{"A", 0}, {"B", 1}}));
  CHECK(f.expected_yield == expected_value(f.posterior.probs, means));
  CHECK(std::abs(f.expected_yield - 150.0) <= 1e-12);
  CHECK(f.expected_yield >= 100.0);
  CHECK(f.expected_yield <= 200.0);
  CHECK(kind_of([&] { expected_yield(net, EvidenceSet(net.catalog(), {{"C", 0}})); }) == ErrorKind::InvalidEvidence);

  VariableCatalog bare({{"A", VariableKind::Raw, 0, testkit::ladder(2)},
                        {"B", VariableKind::Target, 0, testkit::ladder(2)}});
  BayesNet no_means(bare, Dag(bare.names()),
                    {table_cpt("A", {}, {}, {{0.5, 0.5}}), table_cpt("B", {}, {}, {{0.5, 0.5}})});
  CHECK(kind_of([&] { expected_yield(no_means, EvidenceSet(bare, {})); }) == ErrorKind::MissingBinMeans);
}

TEST_CASE("full-evidence expected yield agrees with posterior") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto net = testkit::random_network(rng);
    const auto& cat = net.catalog();
    std::map<std::string, int> ev;
    for (int v = 0; v < cat.size(); ++v) {
      if (v != cat.target_index()) ev[cat[v].name] = testkit::uniform_int(rng, 0, cat[v].bins.bin_count() - 1);
    }
    auto f = expected_yield(net, EvidenceSet(cat, ev));
    auto p = posterior(net, EvidenceSet(cat, ev), cat.target().name);
    double expect = 0.0;
    for (Eigen::Index k = 0; k < p.probs.size(); ++k) expect += p.probs[k] * (*cat.target().bins.bin_means())[k];
    CHECK(std::abs(f.expected_yield - expect) <= 1e-12 * std::abs(expect));
  }
}

TEST_CASE("strength of influence examples") {
  CHECK(strength_of_influence(parent_child({{0.3, 0.7}, {0.3, 0.7}}, 2), "P", "C") == 0.0);
  CHECK(strength_of_influence(parent_child({{1.0, 0.0}, {0.0, 1.0}}, 2), "P", "C") == 1.0);
  CHECK(strength_of_influence(parent_child({{0.9, 0.1}, {0.6, 0.4}}, 2), "P", "C") ==
        doctest::Approx(0.5 * (std::abs(0.9 - 0.6) + std::abs(0.1 - 0.4))).epsilon(1e-14));
  CHECK(kind_of([] { strength_of_influence(parent_child({{0.3, 0.7}, {0.3, 0.7}}, 2), "C", "P"); }) ==
        ErrorKind::UnknownEdge);
}

TEST_CASE("strength of influence is invariant to relabeling parent states") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const int pc = testkit::uniform_int(rng, 2, 4), cc = testkit::uniform_int(rng, 2, 4);
    std::vector<std::vector<double>> rows(pc, std::vector<double>(cc));
    for (auto& r : rows) {
      double s = 0;
      for (auto& x : r) s += (x = 0.01 + testkit::unit(rng));
      for (auto& x : r) x /= s;
    }
    auto permuted = rows;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    const double a = strength_of_influence(parent_child(rows, pc), "P", "C");
    const double b = strength_of_influence(parent_child(permuted, pc), "P", "C");
    CHECK(std::abs(a - b) <= 1e-15);
    CHECK((a >= 0.0 && a <= 1.0));
  }
}

TEST_CASE("strength of influence weights other-parent configurations") {
  // C has parents P and Q. For Q = 0 the rows differ by TV 1, for Q = 1 they
  // agree, so the strength is the empirical share of Q = 0.
  VariableCatalog cat({{"P", VariableKind::Raw, 0, testkit::ladder(2)},
                       {"Q", VariableKind::Raw, 0, testkit::ladder(2)},
                       {"C", VariableKind::Target, 0, testkit::ladder(2, true)}});
  BayesNet net(cat, Dag(cat.names(), {{"P", "C"}, {"Q", "C"}}),
               {table_cpt("P", {}, {}, {{0.5, 0.5}}), table_cpt("Q", {}, {}, {{0.5, 0.5}}),
                table_cpt("C", {"P", "Q"}, {2, 2}, {{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}, {0.5, 0.5}})});
  CHECK(strength_of_influence(net, "P", "C") == doctest::Approx(0.5));
  DiscretizedDataset::Cells cells(4, 3);
  cells << 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 1, 1;
  const DiscretizedDataset data(cat, cells);
  CHECK(strength_of_influence(net, "P", "C", &data) == doctest::Approx(0.75));
}
