// Acceptance run: one PASS/FAIL line per headline criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "cornbn/analysis.hpp"
#include "cornbn/inference.hpp"
#include "cornbn/parameters.hpp"
#include "cornbn/score.hpp"
#include "cornbn/search.hpp"
#include "cornbn/synthetic.hpp"
#include "cornbn/weather.hpp"
#include "cornbn/workflow.hpp"
#include "support/testkit.hpp"
#include "support/cli.hpp"

using namespace cornbn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome inference_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  int queries = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto net = testkit::random_network(rng, {.min_nodes = 2, .max_nodes = 8});
    const int n = net.size();
    std::vector<int> ev(n, -1);
    for (int v = 0; v < n; ++v) {
      if (testkit::unit(rng) < 0.4) ev[v] = testkit::uniform_int(rng, 0, net.catalog()[v].bins.bin_count() - 1);
    }
    for (int q = 0; q < n; ++q) {
      if (ev[q] >= 0) continue;
      const auto oracle = testkit::enumerate_posterior(net, ev, q);
      worst = std::max(worst, (posterior(net, ev, q) - oracle).cwiseAbs().maxCoeff());
      ++queries;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 60.0,
          fmt::format("200 networks, {} queries, max abs error {:.3g}, {:.1f} s", queries, worst, secs)};
}

Outcome structure_recovery() {
  const auto t0 = Clock::now();
  const auto truth = synthetic::six_node_network();
  const auto want = equivalence_signature(truth.dag());
  int matches = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = synthetic::sample(truth, 5000, seed);
    SearchConfig cfg;
    cfg.rng_seed = seed;
    if (equivalence_signature(learn_structure(data, {}, cfg).dag) == want) ++matches;
  }
  const double secs = seconds_since(t0);
  return {matches >= 8 && secs < 120.0, fmt::format("CPDAG matched in {}/10 seeds, {:.1f} s", matches, secs)};
}

Outcome constraint_compliance() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  long violations = 0;
  int forced_total = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto net = testkit::random_network(rng, {.min_nodes = 2, .max_nodes = 6});
    const auto data = synthetic::sample(net, 150, trial);
    const auto names = data.catalog().names();
    const int n = static_cast<int>(names.size());
    std::map<std::string, int> tiers;
    for (const auto& nm : names) {
      if (testkit::unit(rng) < 0.6) tiers[nm] = testkit::uniform_int(rng, 0, 2);
    }
    auto tier = [&](int v) { return tiers.count(names[v]) ? tiers[names[v]] : 0; };
    std::set<NamedEdge> forbidden;
    for (int k = 0; k < n; ++k) {
      const int a = testkit::uniform_int(rng, 0, n - 1), b = testkit::uniform_int(rng, 0, n - 1);
      if (a != b) forbidden.emplace(names[a], names[b]);
    }
    // Forced edges follow a tier-respecting order, so the instance is feasible.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return tier(a) < tier(b); });
    std::set<NamedEdge> forced;
    std::vector<int> forced_parents(n, 0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const NamedEdge e{names[order[i]], names[order[j]]};
        if (testkit::unit(rng) < 0.15 && !forbidden.count(e) && forced_parents[order[j]] < 2) {
          forced.insert(e);
          ++forced_parents[order[j]];
        }
      }
    }
    forced_total += static_cast<int>(forced.size());
    KnowledgeConstraints kc(forbidden, forced, tiers);
    SearchConfig cfg;
    cfg.rng_seed = trial;
    cfg.restarts = 2;
    cfg.max_parents = 3;
    violations += static_cast<long>(constraints_check(learn_structure(data, kc, cfg).dag, kc, data.catalog()).size());
  }
  return {violations == 0, fmt::format("1000 instances ({} forced edges), {} violations, {:.1f} s", forced_total,
                                       violations, seconds_since(t0))};
}

Outcome bic_closed_form() {
  Eigen::MatrixXd counts(1, 2);
  counts << 3.0, 1.0;
  const double got = family_bic(counts);
  const double expect = 3.0 * std::log(0.75) + std::log(0.25) - std::log(4.0) / 2.0;
  return {std::abs(got - expect) <= 1e-12, fmt::format("{:.15f} vs {:.15f}", got, expect)};
}

Outcome em_monotone() {
  std::mt19937_64 rng(55);
  int bad = 0, iterations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto net = testkit::random_network(rng, {.min_nodes = 3, .max_nodes = 5, .max_card = 3});
    auto data = synthetic::sample(net, 400, 1000 + trial);
    auto cells = data.cells();
    const double rate = 0.05 + 0.25 * testkit::unit(rng);
    for (int r = 0; r < cells.rows(); ++r) {
      for (int c = 0; c < cells.cols(); ++c) {
        if (testkit::unit(rng) < rate) cells(r, c) = kMissing;
      }
    }
    try {
      const auto em = em_fit(net.dag(), DiscretizedDataset(data.catalog(), cells), 0.0, 1e-8, 200);
      iterations += static_cast<int>(em.log_likelihood.size());
      for (std::size_t i = 1; i < em.log_likelihood.size(); ++i) {
        if (em.log_likelihood[i] < em.log_likelihood[i - 1] - 1e-9) {
          ++bad;
          break;
        }
      }
    } catch (const Error& e) {
      ++bad;
      std::cerr << fmt::format("em fixture {}: {}\n", trial, e.what());
    }
  }
  return {bad == 0, fmt::format("50 fixtures, {} iterations checked, {} decreasing", iterations, bad)};
}

Outcome expected_yield_formula() {
  const std::vector<double> means{100, 140, 160, 200};
  bool ok = expected_value(Eigen::VectorXd::Constant(4, 0.25), means) == 150.0;
  for (int k = 0; k < 4; ++k) ok = ok && expected_value(Eigen::VectorXd::Unit(4, k), means) == means[k];
  return {ok, fmt::format("uniform -> {}, point masses -> bin means", expected_value(Eigen::VectorXd::Constant(4, 0.25), means))};
}

Outcome gdd() {
  const bool examples = compute_gdd(86, 50, 50) == 18.0 && compute_gdd(95, 40, 50) == 18.0 && compute_gdd(60, 40, 50) == 5.0;
  std::mt19937_64 rng(3);
  double worst_hi = 0.0, worst_lo = 0.0, max_gdd = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double a = -40.0 + 160.0 * testkit::unit(rng), b = -40.0 + 160.0 * testkit::unit(rng);
    const double hi = std::max(a, b), lo = std::min(a, b);
    const double g = compute_gdd(hi, lo);
    if (g > max_gdd) {
      max_gdd = g;
      worst_hi = hi;
      worst_lo = lo;
    }
  }
  const bool in_range = max_gdd <= 18.0;
  return {examples && in_range,
          fmt::format("examples {}; range property {}: max GDD {:.2f} at (t_max {:.1f}, t_min {:.1f})",
                      examples ? "ok" : "wrong", in_range ? "holds" : "violated", max_gdd, worst_hi, worst_lo)};
}

Outcome published_arithmetic() {
  const int counts[4][4] = {{6, 0, 0, 0}, {4, 11, 0, 0}, {0, 1, 14, 7}, {2, 0, 6, 46}};
  std::vector<std::pair<int, int>> pairs;
  for (int t = 0; t < 4; ++t) {
    for (int p = 0; p < 4; ++p) {
      for (int c = 0; c < counts[t][p]; ++c) pairs.emplace_back(t, p);
    }
  }
  const auto cm = confusion_matrix(pairs, 4);
  const double acc = cm.accuracy().value_or(-1.0);
  const double e1 = round_to(county_error(171.6, 171.71), 2);
  const double e2 = round_to(county_error(174.6, 174.39), 2);
  const bool ok = cm.total() == 97 && std::abs(acc - 77.0 / 97.0) <= 1e-12 && e1 == 0.06 && e2 == 0.12;
  return {ok, fmt::format("accuracy {}/{} = {:.6f}; errors {:.2f}, {:.2f}", static_cast<long>(cm.counts.trace()), cm.total(), acc, e1, e2)};
}

Outcome whatif_shapes() {
  const auto net = synthetic::whatif_network();
  const EvidenceSet none(net.catalog(), {});
  const auto soil = whatif(net, "Soil_WA", none);
  const auto di = whatif(net, "DI_Avg", none);
  bool monotone = soil.size() == 4;
  for (std::size_t i = 1; i < soil.size(); ++i) monotone = monotone && *soil[i].expected_yield > *soil[i - 1].expected_yield;
  bool peaked = di.size() == 4;
  if (peaked) {
    const double inner = std::min(*di[1].expected_yield, *di[2].expected_yield);
    peaked = *di[0].expected_yield < inner && *di[3].expected_yield < inner;
  }
  auto seq = [](const std::vector<WhatIfEntry>& es) {
    std::vector<std::string> v;
    for (const auto& e : es) v.push_back(fmt::format("{:.1f}", *e.expected_yield));
    return fmt::format("{}", fmt::join(v, ", "));
  };
  return {monotone && peaked, fmt::format("soil [{}], drought [{}]", seq(soil), seq(di))};
}

Outcome learn_determinism(const fs::path& dir) {
  fs::create_directories(dir);
  const auto truth = synthetic::six_node_network();
  const auto panel = synthetic::to_panel(synthetic::sample(truth, 1000, 11), synthetic::six_node_ranges(), 12, 2000, 10);
  panel.write_csv(dir / "six.csv");
  for (const char* out : {"a.json", "b.json"}) {
    const auto r = testkit::run_cli(
        fmt::format("learn {} --seed 7 -o {}", (dir / "six.csv").string(), (dir / out).string()), dir);
    if (r.code != 0) return {false, fmt::format("learn exited {}: {}", r.code, r.err)};
  }
  const auto a = testkit::slurp(dir / "a.json");
  const auto b = testkit::slurp(dir / "b.json");
  return {!a.empty() && a == b, fmt::format("{} bytes, identical: {}", a.size(), a == b)};
}

Outcome end_to_end(const fs::path& dir) {
  fs::create_directories(dir);
  const auto t0 = Clock::now();
  auto p = [&](const char* name) { return (dir / name).string(); };
  const std::vector<std::string> steps{
      fmt::format("synth --seed 2024 --counties 99 --years 6 -o {}", dir.string()),
      fmt::format("ingest {} --recipe {} -o {}", p("raw.csv"), p("recipe.json"), p("panel.csv")),
      fmt::format("split {} --split 0.75 --split-seed 5 --train {} --test {}", p("panel.csv"), p("train.csv"),
                  p("test.csv")),
      fmt::format("learn {} --constraints {} --seed 7 -o {}", p("train.csv"), p("constraints.json"), p("model.json")),
      fmt::format("predict {} {} -o {}", p("model.json"), p("test.csv"), p("forecast.csv")),
      fmt::format("eval {} {} -o {}", p("model.json"), p("test.csv"), p("report.json")),
  };
  for (const auto& step : steps) {
    const auto r = testkit::run_cli(step, dir);
    if (r.code != 0) return {false, fmt::format("'{}' exited {}: {}", step, r.code, r.err)};
  }
  const double secs = seconds_since(t0);
  const auto report = nlohmann::json::parse(testkit::slurp(dir / "report.json"));
  const auto& cm = report["confusion_matrix"];
  const double acc = cm["accuracy"].is_number() ? cm["accuracy"].get<double>() : 0.0;

  // Accuracy of the generating network on the same test rows.
  const auto fixture = synthetic::crop_fixture(99, 6, 2024);
  const auto oracle = evaluate_panel(fixture.truth, RawPanel::read_csv(dir / "test.csv"));
  return {acc >= 0.70 && secs < 300.0,
          fmt::format("test accuracy {:.4f} on {} rows (generating network {:.4f}), {:.1f} s", acc,
                      cm["total"].get<int>(), oracle.confusion.accuracy().value_or(0.0), secs)};
}

}  // namespace

int main() {
  const auto dir = testkit::temp_dir("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"inference oracle equivalence", inference_oracle},
      {"structure recovery", structure_recovery},
      {"constraint compliance", constraint_compliance},
      {"bic closed form", bic_closed_form},
      {"em monotonicity", em_monotone},
      {"expected-yield formula", expected_yield_formula},
      {"gdd", gdd},
      {"confusion and county error arithmetic", published_arithmetic},
      {"what-if shapes", whatif_shapes},
      {"learn determinism", [&] { return learn_determinism(dir / "determinism"); }},
      {"end-to-end synthetic pipeline", [&] { return end_to_end(dir / "pipeline"); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    if (!o.pass) ++failed;
    std::cout << fmt::format("{} {}: {}", o.pass ? "PASS" : "FAIL", name, o.detail) << std::endl;
  }
  std::cout << fmt::format("{}/{} criteria passed", criteria.size() - failed, criteria.size()) << std::endl;
  return failed == 0 ? 0 : 1;
}
