#include <algorithm>
#include <cctype>

#include "evaluator.hpp"
#include "qaoa/error.hpp"

namespace qaoa::opt {

std::string method_name(Method m) {
  switch (m) {
    case Method::SPSA: return "spsa";
    case Method::ADAM: return "adam";
    case Method::AMSGRAD: return "amsgrad";
    case Method::NELDER_MEAD: return "nelder_mead";
    case Method::POWELL: return "powell";
    case Method::CG: return "cg";
    case Method::BFGS: return "bfgs";
    case Method::LBFGS: return "lbfgs";
  }
  return "?";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::SPSA,   Method::ADAM, Method::AMSGRAD, Method::NELDER_MEAD,
                                           Method::POWELL, Method::CG,   Method::BFGS,    Method::LBFGS};
  return methods;
}

Method parse_method(const std::string& name) {
  std::string key;
  for (char c : name) key += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "nelder-mead" || key == "neldermead") key = "nelder_mead";
  if (key == "l_bfgs" || key == "l-bfgs") key = "lbfgs";
  for (Method m : all_methods()) {
    if (method_name(m) == key) return m;
  }
  std::string valid;
  for (Method m : all_methods()) valid += (valid.empty() ? "" : ", ") + method_name(m);
  throw ContractViolation("unknown optimizer '" + name + "'; valid methods: " + valid);
}

bool is_gradient_based(Method m) {
  return m == Method::ADAM || m == Method::AMSGRAD || m == Method::CG || m == Method::BFGS || m == Method::LBFGS;
}

OptimizationTrace minimize(const ObjectiveFn& f, std::span<const double> x0, const OptimizerConfig& cfg,
                           const GradientFn* grad) {
  require(!x0.empty(), "initial point must be nonempty");
  for (double v : x0) require(std::isfinite(v), "initial point must be finite");
  require(cfg.eval_budget >= 2 * x0.size() + 1,
          "evaluation budget " + std::to_string(cfg.eval_budget) + " is below 2*dimension+1");
  require(is_gradient_based(cfg.method) == (grad != nullptr),
          method_name(cfg.method) + (grad ? " does not take a gradient oracle" : " needs a gradient oracle"));
  if (grad) require(grad->cost >= 1, "gradient cost must be >= 1");

  detail::Evaluator ev(f, grad, cfg.eval_budget);
  OptimizationTrace trace;
  std::vector<double> x(x0.begin(), x0.end());
  try {
    switch (cfg.method) {
      case Method::SPSA: detail::run_spsa(ev, x, cfg); break;
      case Method::ADAM: detail::run_adam(ev, x, cfg, false); break;
      case Method::AMSGRAD: detail::run_adam(ev, x, cfg, true); break;
      case Method::NELDER_MEAD: detail::run_nelder_mead(ev, x, cfg); break;
      case Method::POWELL: detail::run_powell(ev, x, cfg); break;
      case Method::CG: detail::run_cg(ev, x, cfg); break;
      case Method::BFGS: detail::run_bfgs(ev, x, cfg); break;
      case Method::LBFGS: detail::run_lbfgs(ev, x, cfg); break;
    }
  } catch (const detail::BudgetExhausted&) {
  } catch (const detail::NonFinite& e) {
    trace.aborted = true;
    trace.abort_reason = e.what;
  }
  if (ev.has_incumbent()) {
    trace.best_params = ev.best_params();
    trace.best_value = ev.best_value();
  } else {
    trace.best_params = x;
    trace.best_value = std::numeric_limits<double>::quiet_NaN();
  }
  trace.history = ev.history();
  trace.evaluations_used = ev.used();
  return trace;
}

}  // namespace qaoa::opt
