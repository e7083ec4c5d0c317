// Command-line front end: ingest, split, discretize, learn, predict, eval,
// serve and synth.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cornbn/errors.hpp"
#include "cornbn/service.hpp"
#include "cornbn/synthetic.hpp"
#include "cornbn/workflow.hpp"

namespace fs = std::filesystem;
using namespace cornbn;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("cornbn");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("HB_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, fmt::format("cannot write {}", path));
  out << text;
}

void require_file(const std::string& path) {
  if (!path.empty() && !fs::exists(path)) {
    throw Error(ErrorKind::IoError, fmt::format("no such file: {}", path));
  }
}

struct Options {
  std::string input, model, output = "-";
  std::string recipe, constraints, bins, train_out, test_out, schemes_out, counties_out;
  std::string bind = "127.0.0.1:8080";
  std::string target = "Yield";
  std::uint64_t seed = 0, split_seed = 0;
  int restarts = 5, max_parents = 4, max_bins = 4, counties = 99, years = 6;
  double alpha = 1.0, split = 0.75, t_base = kDefaultBaseTemp, threshold = 20.0;
  bool split_by_year = false;
};

CatalogOptions catalog_options(const Options& o) {
  CatalogOptions c;
  c.target = o.target;
  c.max_bins = o.max_bins;
  if (o.target != "Yield") c.fixed_edges.clear();
  if (!o.bins.empty()) {
    for (auto& [name, edges] : load_fixed_edges(o.bins)) c.fixed_edges[name] = edges;
  }
  return c;
}

int run_ingest(const Options& o) {
  require_file(o.input);
  require_file(o.recipe);
  IngestOptions io;
  io.aggregate.t_base = o.t_base;
  const auto panel = ingest(DailyTable::read_csv(o.input), load_recipe(o.recipe), io);
  emit(panel.to_csv(), o.output);
  return kExitOk;
}

int run_split(const Options& o) {
  require_file(o.input);
  const auto parts = split_panel(RawPanel::read_csv(o.input), o.split, o.split_seed, o.split_by_year);
  emit(parts.train.to_csv(), o.train_out);
  emit(parts.test.to_csv(), o.test_out);
  return kExitOk;
}

int run_discretize(const Options& o) {
  require_file(o.input);
  require_file(o.bins);
  const auto panel = RawPanel::read_csv(o.input);
  const auto data = discretize_panel(panel, build_catalog(panel, catalog_options(o)));
  emit(data.to_csv(), o.output);
  if (!o.schemes_out.empty()) emit(data.schemes_json().dump(2) + "\n", o.schemes_out);
  return kExitOk;
}

int run_learn(const Options& o) {
  require_file(o.input);
  require_file(o.constraints);
  require_file(o.bins);
  LearnConfig cfg;
  cfg.catalog = catalog_options(o);
  cfg.search.restarts = o.restarts;
  cfg.search.max_parents = o.max_parents;
  cfg.search.rng_seed = o.seed;
  cfg.alpha = o.alpha;
  const auto kc = o.constraints.empty() ? KnowledgeConstraints{} : KnowledgeConstraints::load(o.constraints);
  emit(dump_model(learn_model(RawPanel::read_csv(o.input), kc, cfg)), o.output);
  return kExitOk;
}

int run_predict(const Options& o) {
  require_file(o.model);
  require_file(o.input);
  emit(predict_csv(load_model(o.model).net, RawPanel::read_csv(o.input)), o.output);
  return kExitOk;
}

int run_eval(const Options& o) {
  require_file(o.model);
  require_file(o.input);
  const auto report = evaluate_panel(load_model(o.model).net, RawPanel::read_csv(o.input), {o.threshold});
  emit(report.to_json().dump(2) + "\n", o.output);
  if (!o.counties_out.empty()) emit(report.county_csv(), o.counties_out);
  return kExitOk;
}

int run_serve(const Options& o) {
  require_file(o.model);
  const auto colon = o.bind.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--bind expects host:port");
  const std::string host = o.bind.substr(0, colon);
  const int port = std::stoi(o.bind.substr(colon + 1));
  HttpServer server(std::make_shared<const ModelService>(load_model(o.model)));
  const int bound = server.bind(host, port);
  std::cout << fmt::format("listening on {}:{}", host, bound) << std::endl;
  server.listen();
  return kExitOk;
}

int run_synth(const Options& o) {
  const fs::path dir = o.output == "-" ? fs::path(".") : fs::path(o.output);
  fs::create_directories(dir);
  const auto fixture = synthetic::crop_fixture(o.counties, o.years, o.seed);
  emit(synthetic::daily_to_csv(fixture.raw), (dir / "raw.csv").string());
  emit(synthetic::recipe_to_json(fixture.recipe).dump(2) + "\n", (dir / "recipe.json").string());
  emit(fixture.constraints.to_json().dump(2) + "\n", (dir / "constraints.json").string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Bayesian network crop yield forecasting"};
  app.require_subcommand(1);
  Options o;

  auto* ingest_cmd = app.add_subcommand("ingest", "Aggregate daily records into a county-year panel");
  ingest_cmd->add_option("raw", o.input, "Daily CSV")->required();
  ingest_cmd->add_option("--recipe", o.recipe, "Derived-variable recipe JSON")->required();
  ingest_cmd->add_option("--t-base", o.t_base, "GDD base temperature (F)");
  ingest_cmd->add_option("-o,--output", o.output, "Panel CSV");

  auto* split_cmd = app.add_subcommand("split", "Split a panel into train and test rows");
  split_cmd->add_option("panel", o.input, "Panel CSV")->required();
  split_cmd->add_option("--split", o.split, "Training fraction");
  split_cmd->add_option("--split-seed", o.split_seed, "Split seed");
  split_cmd->add_flag("--split-by-year", o.split_by_year, "Hold out the latest years");
  split_cmd->add_option("--train", o.train_out, "Training panel CSV")->required();
  split_cmd->add_option("--test", o.test_out, "Test panel CSV")->required();

  auto* disc_cmd = app.add_subcommand("discretize", "Learn bin schemes and map a panel to bins");
  disc_cmd->add_option("panel", o.input, "Panel CSV")->required();
  disc_cmd->add_option("--bins", o.bins, "Fixed edges JSON");
  disc_cmd->add_option("--max-bins", o.max_bins, "Bin limit per variable");
  disc_cmd->add_option("--target", o.target, "Target column");
  disc_cmd->add_option("--schemes", o.schemes_out, "Bin scheme JSON");
  disc_cmd->add_option("-o,--output", o.output, "Bin index CSV");

  auto* learn_cmd = app.add_subcommand("learn", "Learn structure and parameters");
  learn_cmd->add_option("panel", o.input, "Training panel CSV")->required();
  learn_cmd->add_option("--constraints", o.constraints, "Constraints JSON");
  learn_cmd->add_option("--bins", o.bins, "Fixed edges JSON");
  learn_cmd->add_option("--max-bins", o.max_bins, "Bin limit per variable");
  learn_cmd->add_option("--target", o.target, "Target column");
  learn_cmd->add_option("--seed", o.seed, "Search seed");
  learn_cmd->add_option("--restarts", o.restarts, "Random restarts");
  learn_cmd->add_option("--max-parents", o.max_parents, "Parent limit");
  learn_cmd->add_option("--alpha", o.alpha, "Dirichlet smoothing");
  learn_cmd->add_option("-o,--output", o.output, "Model JSON");

  auto* predict_cmd = app.add_subcommand("predict", "Forecast yield for evidence rows");
  predict_cmd->add_option("model", o.model, "Model JSON")->required();
  predict_cmd->add_option("evidence", o.input, "Evidence panel CSV")->required();
  predict_cmd->add_option("-o,--output", o.output, "Forecast CSV");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a test panel");
  eval_cmd->add_option("model", o.model, "Model JSON")->required();
  eval_cmd->add_option("panel", o.input, "Test panel CSV")->required();
  eval_cmd->add_option("--threshold", o.threshold, "Percent error threshold");
  eval_cmd->add_option("--counties", o.counties_out, "Per-county CSV");
  eval_cmd->add_option("-o,--output", o.output, "Report JSON");

  auto* serve_cmd = app.add_subcommand("serve", "Serve a model over HTTP");
  serve_cmd->add_option("model", o.model, "Model JSON")->required();
  serve_cmd->add_option("--bind", o.bind, "host:port");

  auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic crop fixture");
  synth_cmd->add_option("--seed", o.seed, "Generator seed");
  synth_cmd->add_option("--counties", o.counties, "Pseudo-counties");
  synth_cmd->add_option("--years", o.years, "Years per county");
  synth_cmd->add_option("-o,--output", o.output, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) return run_ingest(o);
    if (*split_cmd) return run_split(o);
    if (*disc_cmd) return run_discretize(o);
    if (*learn_cmd) return run_learn(o);
    if (*predict_cmd) return run_predict(o);
    if (*eval_cmd) return run_eval(o);
    if (*serve_cmd) return run_serve(o);
    if (*synth_cmd) return run_synth(o);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
