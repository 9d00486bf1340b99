#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qaoa/error.hpp"
#include "qaoa/harness.hpp"

using namespace qaoa;
using namespace qaoa::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(QAOA_SOURCE_DIR) / "configs";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qaoa_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunRecord make_record(const std::string& graph, int depth, opt::Method m, double value) {
  RunRecord r;
  r.graph_id = graph;
  r.depth = depth;
  r.optimizer = m;
  r.final_expectation = value;
  r.success_prob = std::numeric_limits<double>::quiet_NaN();
  return r;
}

// Small but non-trivial grid: two graphs, two depths, two optimizers, two trials.
ExperimentConfig small_grid() {
  return parse_experiment_config(R"({
    "experiment": "optimizer_comparison",
    "graphs": {"source": "enumerated", "n": 4, "indices": [0, 5]},
    "depths": [1, 2],
    "optimizers": ["nelder_mead", "bfgs"],
    "backends": ["statevector", "shots"],
    "shots": 500,
    "trials": 2,
    "eval_budget": 120,
    "seed": 99
  })");
}

}  // namespace

TEST_CASE("summary statistics") {
  const auto s = summarize({5, 3, 1, 4, 2});
  CHECK(s.count == 5);
  CHECK(s.median == 3);
  CHECK(s.q1 == 2);
  CHECK(s.q3 == 4);
  CHECK(s.min == 1);
  CHECK(s.max == 5);
  CHECK(s.mean == 3);
  CHECK(s.std == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));

  const auto one = summarize({7.25});
  CHECK(one.mean == 7.25);
  CHECK(one.min == 7.25);
  CHECK(one.max == 7.25);
  CHECK(one.std == 0.0);

  const auto four = summarize({1, 2, 3, 4});
  CHECK(four.q1 == doctest::Approx(1.75));
  CHECK(four.median == doctest::Approx(2.5));
  CHECK(four.q3 == doctest::Approx(3.25));
  CHECK_THROWS_AS(summarize({}), ContractViolation);
}

TEST_CASE("aggregate grouping") {
  std::vector<RunRecord> records;
  // Optimizer comparison shape: 21 graphs x 10 trials x 5 depths x 8 optimizers.
  for (int g = 0; g < 21; ++g)
    for (int p = 1; p <= 5; ++p)
      for (auto m : opt::all_methods())
        for (int t = 0; t < 10; ++t) {
          auto r = make_record("g" + std::to_string(g), p, m, g + 0.1 * t);
          r.trial = t;
          records.push_back(r);
        }
  REQUIRE(records.size() == 8400);
  const auto groups = aggregate(records, {"optimizer", "depth", "backend"});
  CHECK(groups.size() == 40);
  for (const auto& g : groups) {
    CHECK(g.expectation.count == 210);
    CHECK_FALSE(g.success.has_value());
  }
  // Numeric ordering on depth.
  const auto by_depth = aggregate(records, {"depth"});
  REQUIRE(by_depth.size() == 5);
  for (int p = 0; p < 5; ++p) CHECK(by_depth[static_cast<std::size_t>(p)].key[0] == std::to_string(p + 1));

  CHECK_THROWS_AS(aggregate({}, {"depth"}), ContractViolation);
  CHECK_THROWS_AS(aggregate(records, {"colour"}), ContractViolation);

  const auto single = aggregate({make_record("x", 3, opt::Method::SPSA, 4.5)}, {"graph_id"});
  REQUIRE(single.size() == 1);
  CHECK(single[0].expectation.mean == 4.5);
  CHECK(single[0].expectation.std == 0.0);
}

TEST_CASE("shipped configs load and plan the documented grids") {
  auto plan = [](const std::string& name) {
    const auto cfg = load_experiment_config(kConfigs / name);
    return plan_cells(cfg, resolve_graphs(cfg.graphs)).size();
  };
  CHECK(plan("smoke.json") == 1);
  CHECK(plan("optimizer_comparison.json") == 8400);
  CHECK(plan("optimizer_comparison_noisy.json") == 8400);
  CHECK(plan("depth_sweep.json") == 3000);
  CHECK(plan("depth_sweep_statevector.json") == 600);
  CHECK(plan("success_probability.json") == 1800);
}

TEST_CASE("five-edge graph selection") {
  const auto depth = load_experiment_config(kConfigs / "depth_sweep.json");
  const auto verify = load_experiment_config(kConfigs / "success_probability.json");
  const auto a = resolve_graphs(depth.graphs);
  const auto b = resolve_graphs(verify.graphs);
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  for (const auto& g : a) CHECK(g.graph.n_edges() == 5);
  for (const auto& g : b) CHECK(g.graph.n_edges() == 5);
  CHECK(a[0].id != a[1].id);
  CHECK(b[0].id != a[1].id);
  CHECK(b[2].id == a[0].id);  // only five such graphs exist
}

TEST_CASE("config validation reports the offending field") {
  auto field_of = [](const std::string& text) {
    try {
      parse_experiment_config(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  const std::string base = R"("experiment": "optimizer_comparison", "graphs": {"n": 3}, "optimizers": ["bfgs"])";
  CHECK(field_of("{" + base + R"(, "depths": [1], "trials": 0})") == "trials");
  CHECK(field_of("{" + base + R"(, "depths": []})") == "depths");
  CHECK(field_of("{" + base + R"(, "depths": [1, 0]})") == "depths[1]");
  CHECK(field_of("{" + base + R"(, "depths": [1], "colour": 3})") == "colour");
  CHECK(field_of("{" + base + R"(, "depths": [1], "backends": ["qpu"]})") == "backends[0]");
  CHECK(field_of("{" + base + R"(, "depths": [1], "calibration": "/no/such/file.json"})") == "calibration");
  CHECK(field_of("{" + base + R"(, "depths": [1], "penalty": {"a": 0.5, "b": 1}})") == "penalty");
  CHECK(field_of("{" + base + R"(, "depths": [1], "hyperparameters": {"spsa": {"a": 0.3, "q": 1}}})") ==
        "hyperparameters.spsa.q");
  CHECK(field_of("{" + base + R"(, "depths": [5], "eval_budget": 10})") == "eval_budget");
  CHECK(field_of(R"({"experiment": "optimizer_comparison", "graphs": {"n": 3}, "depths": [1],
                     "optimizers": ["cobyla"]})") == "optimizers[0]");
  CHECK(field_of(R"({"experiment": "depth_sweep", "graphs": {"n": 3}, "depths": [1],
                     "optimizers": ["spsa"]})") == "optimizers");
  CHECK(field_of(R"({"experiment": "depth_sweep", "graphs": {"source": "files", "files": ["missing.txt"]},
                     "depths": [1]})") == "graphs.files[0]");
  CHECK(field_of("{" + base + R"(, "depths": [1]})") == "<accepted>");
}

TEST_CASE("hyperparameter overrides reach the optimizer config") {
  const auto cfg = parse_experiment_config(R"({
    "experiment": "optimizer_comparison", "graphs": {"n": 3}, "depths": [1], "optimizers": ["spsa", "lbfgs"],
    "hyperparameters": {"spsa": {"a": 0.3, "c": 0.05}, "lbfgs": {"memory": 4}}, "seed": 3})");
  CHECK(cfg.hp(opt::Method::SPSA).spsa_a == 0.3);
  CHECK(cfg.hp(opt::Method::SPSA).spsa_c == 0.05);
  CHECK(cfg.hp(opt::Method::LBFGS).lbfgs_memory == 4);
  CHECK(cfg.hp(opt::Method::BFGS).wolfe_c2 == 0.9);
}

TEST_CASE("cell seeds separate every coordinate") {
  std::set<std::uint64_t> seeds;
  for (const char* g : {"a", "b"})
    for (int p = 1; p <= 3; ++p)
      for (auto m : {opt::Method::SPSA, opt::Method::BFGS})
        for (auto b : {Backend::Statevector, Backend::Noisy})
          for (int t = 0; t < 3; ++t) seeds.insert(cell_seed(5, g, p, m, b, t));
  CHECK(seeds.size() == 2 * 3 * 2 * 2 * 3);
  CHECK(cell_seed(5, "a", 1, opt::Method::SPSA, Backend::Noisy, 0) !=
        cell_seed(6, "a", 1, opt::Method::SPSA, Backend::Noisy, 0));
}

TEST_CASE("smoke experiment is reproducible byte for byte") {
  auto cfg = load_experiment_config(kConfigs / "smoke.json");
  const auto a = scratch("smoke_a"), b = scratch("smoke_b");
  const auto ra = run_experiment(cfg, {a, 1, false, {}});
  const auto rb = run_experiment(cfg, {b, 1, false, {}});
  REQUIRE(ra.size() == 1);
  const std::string csv = slurp(a / "results.csv");
  CHECK(csv == slurp(b / "results.csv"));
  CHECK(slurp(a / "metadata.json") == slurp(b / "metadata.json"));
  CHECK(csv.substr(0, csv.find('\n')) == kCsvHeader);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("record set does not depend on the worker count") {
  const auto cfg = small_grid();
  const auto one = run_experiment(cfg, {{}, 1, false, {}});
  const auto four = run_experiment(cfg, {{}, 4, false, {}});
  CHECK(one.size() == 2 * 2 * 2 * 2 * 2);
  CHECK(to_csv(one) == to_csv(four));
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].params == four[i].params);
}

TEST_CASE("exact-backend records respect the ground-energy bound") {
  const auto cfg = small_grid();
  const auto graphs = resolve_graphs(cfg.graphs);
  const auto records = run_experiment(cfg, {{}, 1, false, {}});
  for (const auto& r : records) {
    const auto g = std::find_if(graphs.begin(), graphs.end(), [&](const NamedGraph& ng) { return ng.id == r.graph_id; });
    const double ground = cfg.penalty.b * min_vertex_covers(g->graph).size;
    CHECK(r.exact_expectation >= ground - 1e-9);
    if (r.backend == Backend::Statevector) {
      CHECK(r.final_expectation >= ground - 1e-9);
      CHECK(r.final_expectation == r.exact_expectation);
    }
    CHECK(r.success_prob >= 0.0);
    CHECK(r.success_prob <= 1.0);
    CHECK(r.evals_used <= cfg.eval_budget.at(r.backend));
  }
}

TEST_CASE("resume after an interruption reproduces the uninterrupted run") {
  const auto cfg = small_grid();
  const auto full = scratch("resume_full"), cut = scratch("resume_cut");
  run_experiment(cfg, {full, 1, false, {}});
  run_experiment(cfg, {cut, 1, false, {}});

  // Simulate a kill: keep the header and ten records, then a torn line.
  std::istringstream in(slurp(cut / "journal.jsonl"));
  std::string line, kept;
  for (int i = 0; i < 11 && std::getline(in, line); ++i) kept += line + "\n";
  std::getline(in, line);
  kept += line.substr(0, line.size() / 2);
  {
    std::ofstream out(cut / "journal.jsonl", std::ios::binary | std::ios::trunc);
    out << kept;
  }
  fs::remove(cut / "results.csv");

  std::size_t already_done = 0;
  bool first = true;
  RunOptions opts{cut, 1, true, [&](std::size_t done, std::size_t) {
                    if (first) already_done = done;
                    first = false;
                  }};
  run_experiment(cfg, opts);
  CHECK(already_done == 10);
  CHECK(slurp(cut / "results.csv") == slurp(full / "results.csv"));

  // A different config refuses to resume from this journal.
  auto other = cfg;
  other.trials = 3;
  CHECK_THROWS_AS(run_experiment(other, {cut, 1, true, {}}), ContractViolation);
}

TEST_CASE("CSV and journal round trips") {
  const auto records = run_experiment(small_grid(), {{}, 1, false, {}});
  const auto table = parse_csv(to_csv(records));
  CHECK(table.rows.size() == records.size());
  const auto back = records_from_table(table);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].key() == records[i].key());
    CHECK(back[i].seed == records[i].seed);
    CHECK(back[i].final_expectation == records[i].final_expectation);
    CHECK(back[i].success_prob == records[i].success_prob);
    CHECK(back[i].evals_used == records[i].evals_used);
    const auto j = record_from_json(record_to_json(records[i]));
    CHECK(j.params == records[i].params);
    CHECK(j.exact_expectation == records[i].exact_expectation);
  }
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), ParseError);
  try {
    records_from_table(parse_csv("depth,final_expectation\nthree,1.0\n"));
    FAIL("bad depth accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("experiment wrappers check the kind") {
  const auto cfg = small_grid();
  CHECK_THROWS_AS(run_depth_sweep(cfg, {}), ContractViolation);
  CHECK_THROWS_AS(run_success_probability(cfg, {}), ContractViolation);
  auto unseeded = cfg;
  unseeded.seed.reset();
  CHECK_THROWS_AS(run_optimizer_comparison(unseeded, {}), ContractViolation);
}

TEST_CASE("depth sweep assigns the optimizer by backend") {
  const auto cfg = parse_experiment_config(R"({
    "experiment": "depth_sweep", "graphs": {"n": 3, "indices": [1]}, "depths": [1, 2],
    "backends": ["noisy", "statevector"], "trials": 1, "shots": 200, "seed": 4,
    "eval_budget": {"noisy": 40, "statevector": 60}})");
  const auto records = run_depth_sweep(cfg, {});
  REQUIRE(records.size() == 4);
  for (const auto& r : records)
    CHECK(r.optimizer == (r.backend == Backend::Noisy ? opt::Method::SPSA : opt::Method::BFGS));
}
