#include "qaoa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qaoa/error.hpp"
#include "qaoa/rng.hpp"

namespace qaoa::harness {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::OptimizerComparison: return "optimizer_comparison";
    case ExperimentKind::DepthSweep: return "depth_sweep";
    case ExperimentKind::SuccessProbability: return "success_probability";
  }
  return "?";
}

ExperimentKind parse_kind(const std::string& name) {
  for (auto k : {ExperimentKind::OptimizerComparison, ExperimentKind::DepthSweep, ExperimentKind::SuccessProbability})
    if (kind_name(k) == name) return k;
  throw ContractViolation("unknown experiment '" + name +
                          "' (valid: optimizer_comparison, depth_sweep, success_probability)");
}

// ---------------------------------------------------------------------------------------------
// Config

namespace {

struct HpField {
  const char* key;
  double opt::Hyperparameters::*member;
};

const std::map<opt::Method, std::vector<HpField>>& hp_fields() {
  using H = opt::Hyperparameters;
  static const std::map<opt::Method, std::vector<HpField>> fields{
      {opt::Method::SPSA,
       {{"a", &H::spsa_a}, {"c", &H::spsa_c}, {"alpha", &H::spsa_alpha}, {"gamma", &H::spsa_gamma},
        {"stability", &H::spsa_stability}}},
      {opt::Method::ADAM,
       {{"learning_rate", &H::learning_rate}, {"beta1", &H::beta1}, {"beta2", &H::beta2}, {"epsilon", &H::epsilon},
        {"gtol", &H::gtol}}},
      {opt::Method::AMSGRAD,
       {{"learning_rate", &H::learning_rate}, {"beta1", &H::beta1}, {"beta2", &H::beta2}, {"epsilon", &H::epsilon},
        {"gtol", &H::gtol}}},
      {opt::Method::NELDER_MEAD,
       {{"reflection", &H::nm_reflection}, {"expansion", &H::nm_expansion}, {"contraction", &H::nm_contraction},
        {"shrink", &H::nm_shrink}, {"initial_step", &H::nm_initial_step}, {"fatol", &H::nm_fatol},
        {"xatol", &H::nm_xatol}}},
      {opt::Method::POWELL, {{"line_tol", &H::powell_line_tol}}},
      {opt::Method::CG, {{"c1", &H::armijo_c1}, {"gtol", &H::gtol}}},
      {opt::Method::BFGS, {{"c1", &H::armijo_c1}, {"c2", &H::wolfe_c2}, {"gtol", &H::gtol}}},
      {opt::Method::LBFGS, {{"c1", &H::armijo_c1}, {"c2", &H::wolfe_c2}, {"gtol", &H::gtol}}},
  };
  return fields;
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

std::int64_t get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

const json& get_array(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array");
  if (j.empty()) throw ConfigError(field, "must be nonempty");
  return j;
}

opt::Method get_method(const json& j, const std::string& field) {
  try {
    return opt::parse_method(get_string(j, field));
  } catch (const ContractViolation& e) {
    throw ConfigError(field, e.what());
  }
}

Backend get_backend(const json& j, const std::string& field) {
  try {
    return parse_backend(get_string(j, field));
  } catch (const ContractViolation& e) {
    throw ConfigError(field, e.what());
  }
}

fs::path resolve_path(const std::string& p, const fs::path& base_dir) {
  fs::path path(p);
  return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
  }
  check_keys(j, "",
             {"description", "experiment", "graphs", "depths", "optimizers", "backends", "shots", "trials", "penalty",
              "calibration", "seed", "eval_budget", "noisy_optimizer", "statevector_optimizer", "hyperparameters",
              "record_wall_time"});
  for (const char* key : {"experiment", "graphs", "depths"})
    if (!j.contains(key)) throw ConfigError(key, "missing");

  ExperimentConfig cfg;
  try {
    cfg.kind = parse_kind(get_string(j["experiment"], "experiment"));
  } catch (const ContractViolation& e) {
    throw ConfigError("experiment", e.what());
  }

  const json& g = j["graphs"];
  check_keys(g, "graphs", {"source", "n", "edges", "indices", "files"});
  const std::string source = g.contains("source") ? get_string(g["source"], "graphs.source") : "enumerated";
  if (source == "enumerated") {
    if (g.contains("files")) throw ConfigError("graphs.files", "only valid with source \"files\"");
    if (g.contains("n")) cfg.graphs.n = static_cast<int>(get_int(g["n"], "graphs.n"));
    if (cfg.graphs.n < 1 || cfg.graphs.n > 7) throw ConfigError("graphs.n", "must be in [1, 7]");
    if (g.contains("edges")) cfg.graphs.edges = static_cast<int>(get_int(g["edges"], "graphs.edges"));
    if (g.contains("indices")) {
      const auto& a = get_array(g["indices"], "graphs.indices");
      for (std::size_t i = 0; i < a.size(); ++i) {
        const auto v = get_int(a[i], "graphs.indices[" + std::to_string(i) + "]");
        if (v < 0) throw ConfigError("graphs.indices[" + std::to_string(i) + "]", "must be >= 0");
        cfg.graphs.indices.push_back(static_cast<int>(v));
      }
    }
  } else if (source == "files") {
    cfg.graphs.kind = GraphSource::Kind::Files;
    for (const char* key : {"n", "edges", "indices"})
      if (g.contains(key)) throw ConfigError(std::string("graphs.") + key, "only valid with source \"enumerated\"");
    if (!g.contains("files")) throw ConfigError("graphs.files", "missing");
    const auto& a = get_array(g["files"], "graphs.files");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string field = "graphs.files[" + std::to_string(i) + "]";
      auto path = resolve_path(get_string(a[i], field), base_dir);
      if (!fs::exists(path)) throw ConfigError(field, "file not found: " + path.string());
      cfg.graphs.files.push_back(std::move(path));
    }
  } else {
    throw ConfigError("graphs.source", "expected \"enumerated\" or \"files\"");
  }

  const auto& depths = get_array(j["depths"], "depths");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const auto v = get_int(depths[i], "depths[" + std::to_string(i) + "]");
    if (v < 1 || v > 50) throw ConfigError("depths[" + std::to_string(i) + "]", "must be in [1, 50]");
    cfg.depths.push_back(static_cast<int>(v));
  }

  if (cfg.kind == ExperimentKind::OptimizerComparison) {
    if (!j.contains("optimizers")) throw ConfigError("optimizers", "missing");
    const auto& a = get_array(j["optimizers"], "optimizers");
    for (std::size_t i = 0; i < a.size(); ++i) cfg.optimizers.push_back(get_method(a[i], "optimizers[" + std::to_string(i) + "]"));
  } else if (j.contains("optimizers")) {
    throw ConfigError("optimizers", "not used by " + kind_name(cfg.kind) +
                                        "; set noisy_optimizer / statevector_optimizer instead");
  }

  if (j.contains("backends")) {
    cfg.backends.clear();
    const auto& a = get_array(j["backends"], "backends");
    for (std::size_t i = 0; i < a.size(); ++i) cfg.backends.push_back(get_backend(a[i], "backends[" + std::to_string(i) + "]"));
  }
  if (j.contains("shots")) {
    const auto v = get_int(j["shots"], "shots");
    if (v < 1) throw ConfigError("shots", "must be >= 1");
    cfg.shots = static_cast<std::uint64_t>(v);
  }
  if (j.contains("trials")) {
    const auto v = get_int(j["trials"], "trials");
    if (v < 1) throw ConfigError("trials", "must be >= 1");
    cfg.trials = static_cast<int>(v);
  }
  if (j.contains("penalty")) {
    const json& p = j["penalty"];
    check_keys(p, "penalty", {"a", "b"});
    if (p.contains("a")) cfg.penalty.a = get_number(p["a"], "penalty.a");
    if (p.contains("b")) cfg.penalty.b = get_number(p["b"], "penalty.b");
    try {
      cfg.penalty.validate();
    } catch (const ContractViolation& e) {
      throw ConfigError("penalty", e.what());
    }
  }
  if (j.contains("calibration")) {
    cfg.calibration = resolve_path(get_string(j["calibration"], "calibration"), base_dir);
    if (!fs::exists(cfg.calibration)) throw ConfigError("calibration", "file not found: " + cfg.calibration.string());
    try {
      cfg.noise = load_calibration(cfg.calibration);
    } catch (const ParseError& e) {
      throw ConfigError("calibration", e.what());
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("eval_budget")) {
    const json& b = j["eval_budget"];
    auto budget = [](const json& v, const std::string& field) {
      const auto n = get_int(v, field);
      if (n < 1) throw ConfigError(field, "must be >= 1");
      return static_cast<std::size_t>(n);
    };
    if (b.is_object()) {
      check_keys(b, "eval_budget", {"statevector", "shots", "noisy"});
      for (const auto& [key, v] : b.items()) cfg.eval_budget[parse_backend(key)] = budget(v, "eval_budget." + key);
    } else {
      const auto n = budget(b, "eval_budget");
      for (auto& [_, v] : cfg.eval_budget) v = n;
    }
  }
  if (j.contains("noisy_optimizer")) cfg.noisy_optimizer = get_method(j["noisy_optimizer"], "noisy_optimizer");
  if (j.contains("statevector_optimizer"))
    cfg.statevector_optimizer = get_method(j["statevector_optimizer"], "statevector_optimizer");
  if (j.contains("hyperparameters")) {
    const json& h = j["hyperparameters"];
    if (!h.is_object()) throw ConfigError("hyperparameters", "expected an object");
    for (const auto& [name, values] : h.items()) {
      const std::string where = "hyperparameters." + name;
      const opt::Method m = get_method(json(name), where);
      if (!values.is_object()) throw ConfigError(where, "expected an object");
      opt::Hyperparameters hp;
      for (const auto& [key, v] : values.items()) {
        const std::string field = where + "." + key;
        if (m == opt::Method::LBFGS && key == "memory") {
          const auto mem = get_int(v, field);
          if (mem < 1) throw ConfigError(field, "must be >= 1");
          hp.lbfgs_memory = static_cast<int>(mem);
          continue;
        }
        const auto& fields = hp_fields().at(m);
        auto it = std::find_if(fields.begin(), fields.end(), [&](const HpField& f) { return key == f.key; });
        if (it == fields.end()) throw ConfigError(field, "unknown key");
        const double x = get_number(v, field);
        if (!(x >= 0.0)) throw ConfigError(field, "must be >= 0");
        hp.*(it->member) = x;
      }
      cfg.hyperparameters[m] = hp;
    }
  }
  if (j.contains("record_wall_time")) {
    if (!j["record_wall_time"].is_boolean()) throw ConfigError("record_wall_time", "expected true or false");
    cfg.record_wall_time = j["record_wall_time"].get<bool>();
  }

  // Cross-field checks that need the resolved graphs.
  std::vector<NamedGraph> graphs;
  try {
    graphs = resolve_graphs(cfg.graphs);
  } catch (const ParseError& e) {
    throw ConfigError("graphs", e.what());
  } catch (const ContractViolation& e) {
    throw ConfigError("graphs", e.what());
  }
  const bool noisy = std::find(cfg.backends.begin(), cfg.backends.end(), Backend::Noisy) != cfg.backends.end();
  for (const auto& ng : graphs) {
    if (ng.graph.n_vertices() > (noisy ? 10 : 20))
      throw ConfigError("graphs", "graph " + ng.id + " has too many vertices for the selected backends");
    if (noisy) {
      try {
        cfg.noise.validate_for(ng.graph.n_vertices());
      } catch (const ContractViolation& e) {
        throw ConfigError("calibration", e.what());
      }
    }
  }
  const int max_depth = *std::max_element(cfg.depths.begin(), cfg.depths.end());
  for (Backend b : cfg.backends) {
    if (cfg.eval_budget.at(b) < static_cast<std::size_t>(4 * max_depth + 1))
      throw ConfigError("eval_budget", "budget for " + backend_name(b) + " is below 2*dimension+1 at depth " +
                                           std::to_string(max_depth));
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<document>", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_experiment_config(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(e.field(), std::string(e.what()).substr(e.field().size() + 10) + " (" + path.string() + ")");
  }
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["experiment"] = kind_name(kind);
  json g;
  if (graphs.kind == GraphSource::Kind::Enumerated) {
    g["source"] = "enumerated";
    g["n"] = graphs.n;
    if (graphs.edges) g["edges"] = *graphs.edges;
    g["indices"] = graphs.indices;
  } else {
    // Graph contents, not paths, so the hash follows the data.
    g["source"] = "files";
    json files = json::array();
    for (const auto& f : graphs.files) {
      std::ostringstream os;
      write_graph(os, load_graph(f));
      files.push_back(os.str());
    }
    g["files"] = files;
  }
  j["graphs"] = g;
  j["depths"] = depths;
  json methods = json::array();
  for (auto m : optimizers) methods.push_back(opt::method_name(m));
  j["optimizers"] = methods;
  json backs = json::array();
  for (auto b : backends) backs.push_back(backend_name(b));
  j["backends"] = backs;
  j["shots"] = shots;
  j["trials"] = trials;
  j["penalty"] = {{"a", penalty.a}, {"b", penalty.b}};
  j["calibration"] = json::parse(calibration_to_json(noise));
  j["seed"] = seed ? json(*seed) : json(nullptr);
  json budgets;
  for (const auto& [b, v] : eval_budget) budgets[backend_name(b)] = v;
  j["eval_budget"] = budgets;
  j["noisy_optimizer"] = opt::method_name(noisy_optimizer);
  j["statevector_optimizer"] = opt::method_name(statevector_optimizer);
  json hps;
  for (const auto& [m, hp] : hyperparameters) {
    json h;
    for (const auto& f : hp_fields().at(m)) h[f.key] = hp.*(f.member);
    if (m == opt::Method::LBFGS) h["memory"] = hp.lbfgs_memory;
    hps[opt::method_name(m)] = h;
  }
  j["hyperparameters"] = hps;
  j["record_wall_time"] = record_wall_time;
  return j.dump();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical_json() + "|" + QAOA_VERSION); }

opt::Method ExperimentConfig::optimizer_for(Backend backend) const {
  return backend == Backend::Statevector ? statevector_optimizer : noisy_optimizer;
}

const opt::Hyperparameters& ExperimentConfig::hp(opt::Method m) const {
  static const opt::Hyperparameters defaults;
  auto it = hyperparameters.find(m);
  return it == hyperparameters.end() ? defaults : it->second;
}

std::vector<NamedGraph> resolve_graphs(const GraphSource& source) {
  std::vector<NamedGraph> out;
  if (source.kind == GraphSource::Kind::Files) {
    for (const auto& f : source.files) {
      std::string id = f.stem().string();
      require(id.find(',') == std::string::npos, "graph file name may not contain ',': " + f.string());
      for (const auto& existing : out) require(existing.id != id, "duplicate graph id '" + id + "'");
      out.push_back({id, load_graph(f)});
    }
    return out;
  }
  const auto all = enumerate_connected_graphs(source.n);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!source.edges || static_cast<int>(all[i].n_edges()) == *source.edges) pool.push_back(i);
  require(!pool.empty(), "no connected graphs on " + std::to_string(source.n) + " vertices match the edge filter");
  std::vector<std::size_t> chosen;
  if (source.indices.empty()) {
    chosen = pool;
  } else {
    for (int i : source.indices) {
      require(i >= 0 && static_cast<std::size_t>(i) < pool.size(),
              "graph index " + std::to_string(i) + " out of range (" + std::to_string(pool.size()) + " graphs)");
      chosen.push_back(pool[static_cast<std::size_t>(i)]);
    }
  }
  for (std::size_t i : chosen) {
    char id[32];
    std::snprintf(id, sizeof id, "n%d-%02zu", source.n, i);
    bool seen = false;
    for (const auto& e : out) seen = seen || e.id == id;
    if (!seen) out.push_back({id, all[i]});
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Cells

std::string Cell::key() const {
  return graph_id + "|" + std::to_string(depth) + "|" + opt::method_name(optimizer) + "|" + backend_name(backend) +
         "|" + std::to_string(trial);
}

std::string RunRecord::key() const {
  return graph_id + "|" + std::to_string(depth) + "|" + opt::method_name(optimizer) + "|" + backend_name(backend) +
         "|" + std::to_string(trial);
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& graph_id, int depth, opt::Method m, Backend b,
                        int trial) {
  std::uint64_t s = derive_seed(master, fnv1a(graph_id));
  s = derive_seed(s, static_cast<std::uint64_t>(depth));
  s = derive_seed(s, fnv1a(opt::method_name(m)));
  s = derive_seed(s, fnv1a(backend_name(b)));
  return derive_seed(s, static_cast<std::uint64_t>(trial));
}

std::vector<Cell> plan_cells(const ExperimentConfig& cfg, const std::vector<NamedGraph>& graphs) {
  require(cfg.seed.has_value(), "experiment needs a master seed");
  std::vector<Cell> cells;
  for (const auto& g : graphs) {
    for (int depth : cfg.depths) {
      std::vector<std::pair<opt::Method, Backend>> combos;
      if (cfg.kind == ExperimentKind::OptimizerComparison) {
        for (auto m : cfg.optimizers)
          for (auto b : cfg.backends) combos.emplace_back(m, b);
      } else {
        for (auto b : cfg.backends) combos.emplace_back(cfg.optimizer_for(b), b);
      }
      for (auto [m, b] : combos)
        for (int t = 0; t < cfg.trials; ++t)
          cells.push_back({g.id, depth, m, b, t, cell_seed(*cfg.seed, g.id, depth, m, b, t)});
    }
  }
  return cells;
}

RunRecord run_cell(const ExperimentConfig& cfg, const Graph& graph, const Cell& cell) {
  const auto start = std::chrono::steady_clock::now();
  QaoaObjective obj(graph, cfg.penalty, cell.depth, cell.backend, cfg.shots, derive_seed(cell.seed, 1), cfg.noise);

  std::mt19937_64 rng(derive_seed(cell.seed, 0));
  std::vector<double> x0(obj.dimension());
  for (auto& v : x0) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;

  std::uint64_t next_index = 0;
  const opt::ObjectiveFn f = [&](std::span<const double> x) { return obj(x, next_index++); };
  const opt::GradientFn grad{[&](std::span<const double> x) {
                               auto g = parameter_shift_grad(obj, x, next_index);
                               next_index += obj.gradient_cost();
                               return g;
                             },
                             obj.gradient_cost()};
  opt::OptimizerConfig oc;
  oc.method = cell.optimizer;
  oc.eval_budget = cfg.eval_budget.at(cell.backend);
  oc.hp = cfg.hp(cell.optimizer);
  oc.seed = derive_seed(cell.seed, 2);
  oc.noise_scale = obj.noise_scale();
  const auto trace = opt::minimize(f, x0, oc, opt::is_gradient_based(cell.optimizer) ? &grad : nullptr);

  RunRecord r;
  r.graph_id = cell.graph_id;
  r.depth = cell.depth;
  r.optimizer = cell.optimizer;
  r.backend = cell.backend;
  r.trial = cell.trial;
  r.seed = cell.seed;
  r.final_expectation = trace.best_value;
  r.evals_used = trace.evaluations_used;
  r.params = trace.best_params;
  r.aborted = trace.aborted;
  r.abort_reason = trace.abort_reason;

  const auto covers = min_vertex_covers(graph).covers;
  const auto state = obj.final_state(r.params);
  r.exact_expectation = expectation_exact(state, obj.diagonal());
  const auto* readout =
      cell.backend == Backend::Noisy && cfg.noise.has_readout_error() ? &cfg.noise.readout : nullptr;
  auto probs = state.probabilities();
  if (readout) probs = apply_readout(probs, graph.n_vertices(), *readout);
  r.exact_success_prob = 0.0;
  for (BitString c : covers) r.exact_success_prob += probs[c];
  if (cell.backend == Backend::Statevector) {
    r.success_prob = r.exact_success_prob;
  } else {
    const auto counts = sample(state, cfg.shots, readout, derive_seed(cell.seed, 3));
    r.success_prob = success_probability(counts, covers);
  }
  if (cfg.record_wall_time)
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------------------------
// Persistence

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<RunRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : records) {
    out += r.graph_id + "," + std::to_string(r.depth) + "," + opt::method_name(r.optimizer) + "," +
           backend_name(r.backend) + "," + std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
           format_double(r.final_expectation) + "," + format_double(r.success_prob) + "," +
           std::to_string(r.evals_used) + "," + format_double(r.wall_ms) + "\n";
  }
  return out;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

void write_csv(const fs::path& path, const std::vector<RunRecord>& records) { write_text(path, to_csv(records)); }

int Table::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw ParseError(lineno, "expected " + std::to_string(t.header.size()) + " columns, found " +
                                   std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw ParseError(0, "empty CSV");
  return t;
}

Table read_csv(const fs::path& path) {
  try {
    return parse_csv(read_text(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

std::vector<RunRecord> records_from_table(const Table& t) {
  std::vector<RunRecord> out;
  const int c_graph = t.column("graph_id"), c_depth = t.column("depth"), c_opt = t.column("optimizer"),
            c_backend = t.column("backend"), c_trial = t.column("trial"), c_seed = t.column("seed"),
            c_exp = t.column("final_expectation"), c_sp = t.column("success_prob"), c_evals = t.column("evals_used"),
            c_wall = t.column("wall_ms");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::size_t lineno = i + 2;
    auto num = [&](int c, const char* name) {
      const std::string& s = row[static_cast<std::size_t>(c)];
      if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
      double v = 0.0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError(lineno, std::string("column '") + name + "': not a number: '" + s + "'");
      return v;
    };
    auto integer = [&](int c, const char* name) {
      const std::string& s = row[static_cast<std::size_t>(c)];
      std::uint64_t v = 0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError(lineno, std::string("column '") + name + "': not an integer: '" + s + "'");
      return v;
    };
    RunRecord r;
    r.success_prob = std::numeric_limits<double>::quiet_NaN();
    try {
      if (c_graph >= 0) r.graph_id = row[static_cast<std::size_t>(c_graph)];
      if (c_depth >= 0) r.depth = static_cast<int>(integer(c_depth, "depth"));
      if (c_opt >= 0) r.optimizer = opt::parse_method(row[static_cast<std::size_t>(c_opt)]);
      if (c_backend >= 0) r.backend = parse_backend(row[static_cast<std::size_t>(c_backend)]);
      if (c_trial >= 0) r.trial = static_cast<int>(integer(c_trial, "trial"));
      if (c_seed >= 0) r.seed = integer(c_seed, "seed");
      if (c_exp >= 0) r.final_expectation = num(c_exp, "final_expectation");
      if (c_sp >= 0) r.success_prob = num(c_sp, "success_prob");
      if (c_evals >= 0) r.evals_used = integer(c_evals, "evals_used");
      if (c_wall >= 0) r.wall_ms = num(c_wall, "wall_ms");
    } catch (const ContractViolation& e) {
      throw ParseError(lineno, e.what());
    }
    r.exact_expectation = r.final_expectation;
    r.exact_success_prob = r.success_prob;
    out.push_back(std::move(r));
  }
  return out;
}

std::string record_to_json(const RunRecord& r) {
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  json j{{"graph_id", r.graph_id},
         {"depth", r.depth},
         {"optimizer", opt::method_name(r.optimizer)},
         {"backend", backend_name(r.backend)},
         {"trial", r.trial},
         {"seed", r.seed},
         {"final_expectation", num(r.final_expectation)},
         {"success_prob", num(r.success_prob)},
         {"evals_used", r.evals_used},
         {"wall_ms", r.wall_ms},
         {"params", r.params},
         {"exact_expectation", num(r.exact_expectation)},
         {"exact_success_prob", num(r.exact_success_prob)},
         {"aborted", r.aborted},
         {"abort_reason", r.abort_reason}};
  return j.dump();
}

RunRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  auto num = [](const json& v) { return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>(); };
  RunRecord r;
  r.graph_id = j.at("graph_id").get<std::string>();
  r.depth = j.at("depth").get<int>();
  r.optimizer = opt::parse_method(j.at("optimizer").get<std::string>());
  r.backend = parse_backend(j.at("backend").get<std::string>());
  r.trial = j.at("trial").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.final_expectation = num(j.at("final_expectation"));
  r.success_prob = num(j.at("success_prob"));
  r.evals_used = j.at("evals_used").get<std::size_t>();
  r.wall_ms = j.at("wall_ms").get<double>();
  r.params = j.at("params").get<std::vector<double>>();
  r.exact_expectation = num(j.at("exact_expectation"));
  r.exact_success_prob = num(j.at("exact_success_prob"));
  r.aborted = j.at("aborted").get<bool>();
  r.abort_reason = j.at("abort_reason").get<std::string>();
  return r;
}

// ---------------------------------------------------------------------------------------------
// Execution

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string journal_header(const ExperimentConfig& cfg) {
  return json{{"config_hash", hex64(cfg.hash())}, {"version", QAOA_VERSION}}.dump();
}

// Completed records from an existing journal; a torn trailing line is dropped.
std::map<std::string, RunRecord> read_journal(const fs::path& path, const std::string& expected_header) {
  std::map<std::string, RunRecord> done;
  if (!fs::exists(path)) return done;
  std::istringstream in(read_text(path));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line != expected_header)
        throw ContractViolation("cannot resume: " + path.string() + " was written by a different config or version");
      continue;
    }
    try {
      auto r = record_from_json(line);
      done.emplace(r.key(), std::move(r));
    } catch (const std::exception&) {
      break;
    }
  }
  return done;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  const auto graphs = resolve_graphs(cfg.graphs);
  const auto cells = plan_cells(cfg, graphs);
  std::map<std::string, const Graph*> by_id;
  for (const auto& g : graphs) by_id[g.id] = &g.graph;

  std::vector<std::optional<RunRecord>> results(cells.size());
  const bool persist = !options.out_dir.empty();
  const fs::path journal_path = options.out_dir / "journal.jsonl";
  const std::string header = journal_header(cfg);
  std::ofstream journal;
  if (persist) {
    fs::create_directories(options.out_dir);
    std::map<std::string, RunRecord> done;
    if (options.resume) done = read_journal(journal_path, header);
    std::string rewritten = header + "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      auto it = done.find(cells[i].key());
      if (it != done.end() && it->second.seed == cells[i].seed) {
        rewritten += record_to_json(it->second) + "\n";
        results[i] = std::move(it->second);
      }
    }
    write_text(journal_path, rewritten);
    journal.open(journal_path, std::ios::binary | std::ios::app);
    if (!journal) throw std::runtime_error("cannot append to " + journal_path.string());
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!results[i]) pending.push_back(i);

  std::mutex sink;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::size_t finished = cells.size() - pending.size();
  if (options.progress) options.progress(finished, cells.size());

  auto worker = [&] {
    while (!failed) {
      const std::size_t k = next++;
      if (k >= pending.size()) return;
      const std::size_t i = pending[k];
      try {
        RunRecord r = run_cell(cfg, *by_id.at(cells[i].graph_id), cells[i]);
        std::lock_guard lock(sink);
        if (persist) {
          journal << record_to_json(r) << '\n';
          journal.flush();
        }
        results[i] = std::move(r);
        ++finished;
        if (options.progress) options.progress(finished, cells.size());
      } catch (...) {
        std::lock_guard lock(sink);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(pending.size(), 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<RunRecord> records;
  records.reserve(cells.size());
  for (auto& r : results) records.push_back(std::move(*r));

  if (persist) {
    journal.close();
    write_csv(options.out_dir / "results.csv", records);
    json meta{{"experiment", kind_name(cfg.kind)},
              {"config_hash", hex64(cfg.hash())},
              {"version", QAOA_VERSION},
              {"seed", *cfg.seed},
              {"records", records.size()},
              {"config", json::parse(cfg.canonical_json())}};
    write_text(options.out_dir / "metadata.json", meta.dump(2) + "\n");
  }
  return records;
}

std::vector<RunRecord> run_optimizer_comparison(const ExperimentConfig& cfg, const RunOptions& options) {
  require(cfg.kind == ExperimentKind::OptimizerComparison, "config is not an optimizer_comparison experiment");
  return run_experiment(cfg, options);
}

std::vector<RunRecord> run_depth_sweep(const ExperimentConfig& cfg, const RunOptions& options) {
  require(cfg.kind == ExperimentKind::DepthSweep, "config is not a depth_sweep experiment");
  return run_experiment(cfg, options);
}

std::vector<RunRecord> run_success_probability(const ExperimentConfig& cfg, const RunOptions& options) {
  require(cfg.kind == ExperimentKind::SuccessProbability, "config is not a success_probability experiment");
  return run_experiment(cfg, options);
}

// ---------------------------------------------------------------------------------------------
// Statistics

Summary summarize(std::vector<double> values) {
  require(!values.empty(), "cannot summarize an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, n - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  Summary s;
  s.count = n;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

std::vector<GroupSummary> aggregate(const std::vector<RunRecord>& records, const std::vector<std::string>& keys) {
  require(!records.empty(), "aggregate needs at least one record");
  static const std::vector<std::string> known{"graph_id", "depth", "optimizer", "backend", "trial"};
  for (const auto& k : keys)
    require(std::find(known.begin(), known.end(), k) != known.end(),
            "unknown group-by key '" + k + "' (valid: graph_id, depth, optimizer, backend, trial)");

  auto field = [](const RunRecord& r, const std::string& k) -> std::string {
    if (k == "graph_id") return r.graph_id;
    if (k == "depth") return std::to_string(r.depth);
    if (k == "optimizer") return opt::method_name(r.optimizer);
    if (k == "backend") return backend_name(r.backend);
    return std::to_string(r.trial);
  };
  auto less = [&keys](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (a[i] == b[i]) continue;
      if (keys[i] == "depth" || keys[i] == "trial") return std::stoll(a[i]) < std::stoll(b[i]);
      return a[i] < b[i];
    }
    return false;
  };
  std::map<std::vector<std::string>, std::pair<std::vector<double>, std::vector<double>>, decltype(less)> groups(less);
  for (const auto& r : records) {
    std::vector<std::string> key;
    for (const auto& k : keys) key.push_back(field(r, k));
    auto& [exp, sp] = groups[key];
    exp.push_back(r.final_expectation);
    if (!std::isnan(r.success_prob)) sp.push_back(r.success_prob);
  }
  std::vector<GroupSummary> out;
  for (auto& [key, values] : groups) {
    GroupSummary g{key, summarize(values.first), std::nullopt};
    if (!values.second.empty()) g.success = summarize(values.second);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace qaoa::harness
