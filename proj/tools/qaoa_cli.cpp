// Command-line front end: graph tools, single runs, experiments and reports.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qaoa/error.hpp"
#include "qaoa/graph.hpp"
#include "qaoa/harness.hpp"
#include "qaoa/report.hpp"

namespace fs = std::filesystem;
using namespace qaoa;

namespace {

constexpr std::uint64_t kDemoSeed = 20220101;

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  std::string out;
};

int graphs_enumerate(int n, const std::string& out) {
  const auto graphs = enumerate_connected_graphs(n);
  const fs::path dir = out.empty() ? fs::path("graphs") : fs::path(out);
  fs::create_directories(dir);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "n%d-%02zu.txt", n, i);
    save_graph(dir / name, graphs[i]);
  }
  std::cout << graphs.size() << " graphs written to " << dir.string() << "\n";
  return 0;
}

int graphs_solve(const std::string& file) {
  const Graph g = load_graph(file);
  const auto sol = min_vertex_covers(g);
  std::cout << "size=" << sol.size << ", covers=";
  for (std::size_t i = 0; i < sol.covers.size(); ++i) std::cout << (i ? "," : "") << to_bits(sol.covers[i], g.n_vertices());
  std::cout << "\n";
  return 0;
}

struct RunArgs {
  std::string file;
  int depth = 1;
  std::string optimizer;
  std::string backend = "statevector";
  std::uint64_t shots = 10000;
  std::string calibration;
  std::size_t budget = 0;
  double a = 2.0, b = 1.0;
};

int cmd_run(const RunArgs& args, const Globals& globals) {
  harness::ExperimentConfig cfg;
  cfg.graphs.kind = harness::GraphSource::Kind::Files;
  cfg.graphs.files = {args.file};
  cfg.depths = {args.depth};
  cfg.optimizers = {opt::parse_method(args.optimizer)};
  cfg.backends = {parse_backend(args.backend)};
  cfg.shots = args.shots;
  cfg.penalty = {args.a, args.b};
  cfg.penalty.validate();
  cfg.seed = globals.seed.value_or(kDemoSeed);
  if (!args.calibration.empty()) {
    cfg.calibration = args.calibration;
    cfg.noise = load_calibration(args.calibration);
  }
  if (args.budget) cfg.eval_budget[cfg.backends[0]] = args.budget;

  const auto graphs = harness::resolve_graphs(cfg.graphs);
  const auto cells = harness::plan_cells(cfg, graphs);
  const auto r = harness::run_cell(cfg, graphs[0].graph, cells[0]);

  std::cout << "graph=" << r.graph_id << " depth=" << r.depth << " optimizer=" << opt::method_name(r.optimizer)
            << " backend=" << backend_name(r.backend) << " seed=" << r.seed << "\n"
            << "final_expectation=" << harness::format_double(r.final_expectation) << "\n"
            << "exact_expectation=" << harness::format_double(r.exact_expectation) << "\n"
            << "success_prob=" << harness::format_double(r.success_prob) << "\n"
            << "evals_used=" << r.evals_used << "\n";
  if (r.aborted) std::cout << "aborted: " << r.abort_reason << "\n";

  if (!globals.out.empty()) {
    const fs::path path(globals.out);
    const bool fresh = !fs::exists(path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::app);
    const std::string csv = harness::to_csv({r});
    out << (fresh ? csv : csv.substr(csv.find('\n') + 1));
  }
  return r.aborted ? 1 : 0;
}

int cmd_experiment(const std::string& config_path, bool resume, const Globals& globals) {
  auto cfg = harness::load_experiment_config(config_path);
  if (globals.seed) cfg.seed = globals.seed;
  if (!cfg.seed) {
    std::cerr << "error: experiment needs a master seed (--seed or \"seed\" in the config)\n";
    return 2;
  }
  const fs::path out = globals.out.empty() ? fs::path("results") / fs::path(config_path).stem() : fs::path(globals.out);
  harness::RunOptions options;
  options.out_dir = out;
  options.jobs = globals.jobs;
  options.resume = resume;
  std::size_t last_percent = 101;
  options.progress = [&](std::size_t done, std::size_t total) {
    const std::size_t percent = total ? 100 * done / total : 100;
    if (percent != last_percent) {
      last_percent = percent;
      std::cerr << "\r" << done << "/" << total << " cells" << std::flush;
    }
  };
  const auto records = harness::run_experiment(cfg, options);
  std::cerr << "\n";
  std::cout << records.size() << " records written to " << (out / "results.csv").string() << "\n";
  return 0;
}

int cmd_report(const std::string& input, const std::string& kind, const std::string& group_by,
               const std::string& format, const Globals& globals) {
  report::ReportSpec spec;
  spec.input = input;
  spec.kind = report::parse_kind(kind);
  spec.format = report::parse_format(format);
  if (!group_by.empty()) {
    std::string cur;
    for (char c : group_by + ",") {
      if (c == ',') {
        if (!cur.empty()) spec.group_by.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  const fs::path out = globals.out.empty() ? fs::path(input).parent_path() : fs::path(globals.out);
  const auto path = report::write_report(spec, out);
  std::cout << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA minimum-vertex-cover benchmarking"};
  app.set_version_flag("--version", QAOA_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "master seed")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", globals.jobs, "parallel cells (default: hardware threads)");
  app.add_option("--out", globals.out, "output file or directory");

  auto* graphs = app.add_subcommand("graphs", "enumerate graphs or solve vertex cover");
  graphs->require_subcommand(1);
  int n = 5;
  auto* enumerate = graphs->add_subcommand("enumerate", "write every connected graph on n vertices");
  enumerate->add_option("--n", n, "vertex count")->check(CLI::Range(1, 7));
  std::string solve_file;
  auto* solve = graphs->add_subcommand("solve", "minimum vertex covers of a graph file");
  solve->add_option("file", solve_file, "graph file")->required();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "optimize one instance");
  run->add_option("file", run_args.file, "graph file")->required()->check(CLI::ExistingFile);
  run->add_option("--depth", run_args.depth, "QAOA layers")->check(CLI::Range(1, 50));
  run->add_option("--optimizer", run_args.optimizer, "optimizer name")->required();
  run->add_option("--backend", run_args.backend, "statevector | shots | noisy");
  run->add_option("--shots", run_args.shots, "shots per evaluation")->check(CLI::PositiveNumber);
  run->add_option("--calibration", run_args.calibration, "calibration JSON")->check(CLI::ExistingFile);
  run->add_option("--budget", run_args.budget, "objective-evaluation budget");
  run->add_option("--penalty-a", run_args.a, "edge penalty A");
  run->add_option("--penalty-b", run_args.b, "vertex weight B");

  std::string config_path;
  bool resume = false;
  auto* experiment = app.add_subcommand("experiment", "run a configured experiment grid");
  experiment->add_option("config", config_path, "experiment config JSON")->required()->check(CLI::ExistingFile);
  experiment->add_flag("--resume", resume, "skip cells already in the journal");

  std::string input, kind = "boxplot_table", group_by, format = "csv";
  auto* rep = app.add_subcommand("report", "summarize a results CSV");
  rep->add_option("input", input, "results CSV")->required()->check(CLI::ExistingFile);
  rep->add_option("--kind", kind, "boxplot_table | depth_curve | success_curve");
  rep->add_option("--group-by", group_by, "comma-separated columns");
  rep->add_option("--format", format, "csv | svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (seed_opt->count()) globals.seed = seed;

  try {
    if (*enumerate) return graphs_enumerate(n, globals.out);
    if (*solve) return graphs_solve(solve_file);
    if (*run) return cmd_run(run_args, globals);
    if (*experiment) return cmd_experiment(config_path, resume, globals);
    if (*rep) return cmd_report(input, kind, group_by, format, globals);
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
