#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaoa/gradient.hpp"
#include "qaoa/graph.hpp"
#include "qaoa/hamiltonian.hpp"
#include "qaoa/noise.hpp"
#include "qaoa/optimizers.hpp"

namespace qaoa::harness {

enum class ExperimentKind { OptimizerComparison, DepthSweep, SuccessProbability };

std::string kind_name(ExperimentKind k);  // "optimizer_comparison", "depth_sweep", "success_probability"
ExperimentKind parse_kind(const std::string& name);

/// Config validation failure; `field()` is the JSON path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error("field '" + field + "': " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct NamedGraph {
  std::string id;
  Graph graph;
};

struct GraphSource {
  enum class Kind { Enumerated, Files } kind = Kind::Enumerated;
  int n = 5;
  std::optional<int> edges;   // keep only graphs with this many edges
  std::vector<int> indices;   // positions in the filtered list; empty = all
  std::vector<std::filesystem::path> files;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::OptimizerComparison;
  GraphSource graphs;
  std::vector<int> depths;
  std::vector<opt::Method> optimizers;  // optimizer comparison only
  std::vector<Backend> backends{Backend::Statevector};
  std::uint64_t shots = 10000;
  int trials = 1;
  PenaltyWeights penalty;
  std::filesystem::path calibration;  // empty: built-in default calibration
  NoiseModel noise = NoiseModel::device_default();
  std::optional<std::uint64_t> seed;
  std::map<Backend, std::size_t> eval_budget{
      {Backend::Statevector, 3000}, {Backend::Shots, 1000}, {Backend::Noisy, 1000}};
  opt::Method noisy_optimizer = opt::Method::SPSA;
  opt::Method statevector_optimizer = opt::Method::BFGS;
  std::map<opt::Method, opt::Hyperparameters> hyperparameters;
  bool record_wall_time = false;

  /// Canonical JSON of the resolved config (calibration included); hashed into the metadata.
  std::string canonical_json() const;
  std::uint64_t hash() const;
  /// Optimizer used for a cell on `backend`.
  opt::Method optimizer_for(Backend backend) const;
  const opt::Hyperparameters& hp(opt::Method m) const;
};

/// Parses the JSON experiment config. Relative file paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

std::vector<NamedGraph> resolve_graphs(const GraphSource& source);

struct Cell {
  std::string graph_id;
  int depth = 1;
  opt::Method optimizer = opt::Method::BFGS;
  Backend backend = Backend::Statevector;
  int trial = 0;
  std::uint64_t seed = 0;

  std::string key() const;
};

struct RunRecord {
  std::string graph_id;
  int depth = 1;
  opt::Method optimizer = opt::Method::BFGS;
  Backend backend = Backend::Statevector;
  int trial = 0;
  std::uint64_t seed = 0;
  double final_expectation = 0.0;  // best objective value seen by the optimizer
  double success_prob = 0.0;       // NaN when not recorded
  std::size_t evals_used = 0;
  double wall_ms = 0.0;
  std::vector<double> params;
  double exact_expectation = 0.0;  // exact (pure or mixed) expectation at params
  double exact_success_prob = 0.0;
  bool aborted = false;
  std::string abort_reason;

  std::string key() const;
};

std::uint64_t cell_seed(std::uint64_t master, const std::string& graph_id, int depth, opt::Method m, Backend b,
                        int trial);

/// Grid in deterministic order: graph, depth, optimizer, backend, trial.
std::vector<Cell> plan_cells(const ExperimentConfig& cfg, const std::vector<NamedGraph>& graphs);

/// Runs one cell: uniform initial parameters in [0, 2pi) from the cell seed, then minimize.
RunRecord run_cell(const ExperimentConfig& cfg, const Graph& graph, const Cell& cell);

struct RunOptions {
  std::filesystem::path out_dir;  // empty: nothing persisted
  unsigned jobs = 0;              // 0: hardware concurrency
  bool resume = false;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Executes the grid on a worker pool. With `out_dir`, each finished cell is appended to
/// journal.jsonl; on success results.csv and metadata.json are written in cell order.
/// With `resume`, cells already in the journal are not recomputed.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& options);

std::vector<RunRecord> run_optimizer_comparison(const ExperimentConfig& cfg, const RunOptions& options);
std::vector<RunRecord> run_depth_sweep(const ExperimentConfig& cfg, const RunOptions& options);
std::vector<RunRecord> run_success_probability(const ExperimentConfig& cfg, const RunOptions& options);

// Results files.
inline constexpr const char* kCsvHeader =
    "graph_id,depth,optimizer,backend,trial,seed,final_expectation,success_prob,evals_used,wall_ms";

std::string format_double(double v);  // shortest round-trip; "" for NaN
std::string to_csv(const std::vector<RunRecord>& records);
void write_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

/// Parsed CSV table with named columns.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};
Table parse_csv(const std::string& text);
Table read_csv(const std::filesystem::path& path);
/// Records from a results table; columns that are absent keep their defaults.
std::vector<RunRecord> records_from_table(const Table& t);

std::string record_to_json(const RunRecord& r);
RunRecord record_from_json(const std::string& line);

// Statistics.
struct Summary {
  std::size_t count = 0;
  double mean = 0.0, std = 0.0, min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Quartiles by linear interpolation between order statistics; std uses n - 1 (0 for one value).
Summary summarize(std::vector<double> values);

struct GroupSummary {
  std::vector<std::string> key;  // one entry per group-by column
  Summary expectation;
  std::optional<Summary> success;
};

/// Group-by columns: graph_id, depth, optimizer, backend, trial. Groups in ascending key order
/// (depth and trial numerically).
std::vector<GroupSummary> aggregate(const std::vector<RunRecord>& records, const std::vector<std::string>& keys);

}  // namespace qaoa::harness
