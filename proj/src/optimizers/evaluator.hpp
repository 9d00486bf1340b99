#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qaoa/optimizers.hpp"

namespace qaoa::opt::detail {

struct BudgetExhausted {};
struct NonFinite {
  std::string what;
};

/// Budget accounting and incumbent tracking shared by every method.
class Evaluator {
 public:
  Evaluator(const ObjectiveFn& f, const GradientFn* grad, std::size_t budget)
      : f_(f), grad_(grad), budget_(budget) {}

  double value(std::span<const double> x) {
    if (used_ + 1 > budget_) throw BudgetExhausted{};
    ++used_;
    const double v = f_(x);
    if (!std::isfinite(v)) throw NonFinite{"objective returned a non-finite value"};
    if (best_params_.empty() || v < best_value_) {
      best_value_ = v;
      best_params_.assign(x.begin(), x.end());
      history_.emplace_back(used_, v);
    }
    return v;
  }

  /// Charged like value() but never becomes the incumbent: gradient measurements are not
  /// candidate solutions.
  double probe(std::span<const double> x) {
    if (used_ + 1 > budget_) throw BudgetExhausted{};
    ++used_;
    const double v = f_(x);
    if (!std::isfinite(v)) throw NonFinite{"objective returned a non-finite value"};
    return v;
  }

  std::vector<double> gradient(std::span<const double> x) {
    if (!grad_) throw NonFinite{"gradient requested without a gradient oracle"};
    if (used_ + grad_->cost > budget_) throw BudgetExhausted{};
    used_ += grad_->cost;
    auto g = grad_->fn(x);
    for (double e : g) {
      if (!std::isfinite(e)) throw NonFinite{"gradient returned a non-finite component"};
    }
    return g;
  }

  bool can_afford(std::size_t evaluations) const { return used_ + evaluations <= budget_; }
  std::size_t gradient_cost() const { return grad_ ? grad_->cost : 0; }
  std::size_t used() const { return used_; }
  std::size_t budget() const { return budget_; }

  bool has_incumbent() const { return !best_params_.empty(); }
  const std::vector<double>& best_params() const { return best_params_; }
  double best_value() const { return best_value_; }
  const std::vector<std::pair<std::size_t, double>>& history() const { return history_; }

 private:
  const ObjectiveFn& f_;
  const GradientFn* grad_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::vector<double> best_params_;
  double best_value_ = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, double>> history_;
};

// Small dense vector helpers.
inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double e : a) m = std::max(m, std::abs(e));
  return m;
}

inline std::vector<double> axpy(std::span<const double> x, double alpha, std::span<const double> d) {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * d[i];
  return out;
}

// Method entry points. Each returns normally on convergence and propagates BudgetExhausted.
void run_spsa(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg);
void run_adam(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg, bool amsgrad);
void run_nelder_mead(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg);
void run_powell(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg);
void run_cg(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg);
void run_bfgs(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg);
void run_lbfgs(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg);

}  // namespace qaoa::opt::detail
