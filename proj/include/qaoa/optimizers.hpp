#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qaoa::opt {

enum class Method { SPSA, ADAM, AMSGRAD, NELDER_MEAD, POWELL, CG, BFGS, LBFGS };

std::string method_name(Method m);  // lower-case: "spsa", "adam", ...
/// Case-insensitive; the error for an unknown name lists every valid method.
Method parse_method(const std::string& name);
const std::vector<Method>& all_methods();
bool is_gradient_based(Method m);

/// Method hyperparameters. Defaults are the values the experiments use.
struct Hyperparameters {
  // SPSA gains a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma, A = stability * max_iterations.
  double spsa_a = 0.2;
  double spsa_c = 0.1;
  double spsa_alpha = 0.602;
  double spsa_gamma = 0.101;
  double spsa_stability = 0.1;

  // ADAM / AMSGRAD
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  // Nelder-Mead
  double nm_reflection = 1.0;
  double nm_expansion = 2.0;
  double nm_contraction = 0.5;
  double nm_shrink = 0.5;
  double nm_initial_step = 0.25;
  double nm_fatol = 1e-8;  // stop when the value spread and
  double nm_xatol = 1e-8;  // the simplex extent are both below these

  // Powell line minimization tolerance.
  double powell_line_tol = 1e-6;

  // CG backtracking, BFGS/LBFGS Wolfe line search.
  double armijo_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int lbfgs_memory = 10;

  // Gradient-norm tolerance for the gradient-based methods (noiseless objectives).
  double gtol = 1e-9;
};

struct OptimizerConfig {
  Method method = Method::BFGS;
  std::size_t eval_budget = 1000;
  Hyperparameters hp;
  std::uint64_t seed = 0;
  /// Standard deviation of one objective evaluation (0 for exact objectives). When positive,
  /// convergence tolerances are floored at this scale and converged methods restart from the
  /// incumbent instead of stopping, so noisy runs consume their budget.
  double noise_scale = 0.0;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

/// Gradient oracle together with its price in objective-evaluation units.
struct GradientFn {
  std::function<std::vector<double>(std::span<const double>)> fn;
  std::size_t cost = 1;
};

struct OptimizationTrace {
  std::vector<double> best_params;
  double best_value = 0.0;
  /// (evaluations used so far, incumbent value) at every improvement; non-increasing.
  std::vector<std::pair<std::size_t, double>> history;
  std::size_t evaluations_used = 0;
  bool aborted = false;
  std::string abort_reason;
};

/// Runs the selected method until the evaluation budget or method convergence. Each objective
/// call costs 1, each gradient call costs `grad->cost`. Returns the best candidate point seen;
/// SPSA's perturbation probes are charged but are not candidates. A gradient
/// oracle must be supplied exactly for the gradient-based methods.
OptimizationTrace minimize(const ObjectiveFn& f, std::span<const double> x0, const OptimizerConfig& cfg,
                           const GradientFn* grad = nullptr);

/// Two-sided simultaneous-perturbation estimate with Rademacher directions drawn from `seed`:
///   g = (f(x + c delta) - f(x - c delta)) / (2c) * delta.
std::vector<double> spsa_gradient_estimate(const ObjectiveFn& f, std::span<const double> x, double c_k,
                                           std::uint64_t seed);

}  // namespace qaoa::opt
