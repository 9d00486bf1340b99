#include <algorithm>
#include <cmath>
#include <deque>

#include "line_search.hpp"

namespace qaoa::opt::detail {

namespace {

class DenseInverse {
 public:
  explicit DenseInverse(std::size_t n) : n_(n) { reset(); }

  void reset() {
    h_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) h_[i * n_ + i] = 1.0;
    fresh_ = true;
  }
  bool fresh() const { return fresh_; }

  std::vector<double> direction(const std::vector<double>& g) const {
    std::vector<double> d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) d[i] -= h_[i * n_ + j] * g[j];
    return d;
  }

  void update(const std::vector<double>& s, const std::vector<double>& y) {
    const double sy = dot(s, y);
    if (fresh_) {
      const double scale = sy / dot(y, y);
      for (double& e : h_) e *= scale;
      fresh_ = false;
    }
    // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
    const double rho = 1.0 / sy;
    std::vector<double> hy(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) hy[i] += h_[i * n_ + j] * y[j];
    const double yhy = dot(y, hy);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        h_[i * n_ + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
  }

 private:
  std::size_t n_;
  std::vector<double> h_;
  bool fresh_ = true;
};

class LimitedMemory {
 public:
  explicit LimitedMemory(std::size_t memory) : memory_(std::max<std::size_t>(memory, 1)) {}

  void reset() { pairs_.clear(); }
  bool fresh() const { return pairs_.empty(); }

  std::vector<double> direction(const std::vector<double>& g) const {
    std::vector<double> q = g;
    std::vector<double> a(pairs_.size());
    for (std::size_t k = pairs_.size(); k-- > 0;) {
      const auto& p = pairs_[k];
      a[k] = p.rho * dot(p.s, q);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] -= a[k] * p.y[i];
    }
    if (!pairs_.empty()) {
      const auto& last = pairs_.back();
      const double gamma = 1.0 / (last.rho * dot(last.y, last.y));
      for (double& e : q) e *= gamma;
    }
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      const auto& p = pairs_[k];
      const double b = p.rho * dot(p.y, q);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += (a[k] - b) * p.s[i];
    }
    for (double& e : q) e = -e;
    return q;
  }

  void update(const std::vector<double>& s, const std::vector<double>& y) {
    if (pairs_.size() == memory_) pairs_.pop_front();
    pairs_.push_back({s, y, 1.0 / dot(s, y)});
  }

 private:
  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::size_t memory_;
  std::deque<Pair> pairs_;
};

template <class Model>
void quasi_newton(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg, Model model) {
  const std::size_t n = x.size();
  const double gtol = std::max(cfg.hp.gtol, cfg.noise_scale);
  const bool noisy = cfg.noise_scale > 0.0;

  double fx = ev.value(x);
  auto g = ev.gradient(x);
  for (;;) {
    if (max_abs(g) < gtol) {
      if (!noisy) return;
      x = ev.best_params();
      fx = ev.best_value();
      g = ev.gradient(x);
      model.reset();
      continue;
    }
    auto d = model.direction(g);
    if (dot(g, d) >= 0.0) {
      model.reset();
      d = model.direction(g);
    }
    const double alpha0 = model.fresh() ? std::min(1.0, 1.0 / std::sqrt(dot(g, g))) : 1.0;

    LinePoint step;
    const bool ok = wolfe_search(ev, x, fx, g, d, alpha0, cfg.hp.armijo_c1, cfg.hp.wolfe_c2, step);
    if (!ok && step.alpha == 0.0) {
      if (model.fresh() && !noisy) return;
      model.reset();
      if (noisy) {
        x = ev.best_params();
        fx = ev.best_value();
        g = ev.gradient(x);
      }
      continue;
    }

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = step.x[i] - x[i];
      y[i] = step.g[i] - g[i];
    }
    x = std::move(step.x);
    fx = step.f;
    g = std::move(step.g);
    if (!ok) {
      model.reset();
    } else if (dot(s, y) > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      model.update(s, y);
    }
  }
}

}  // namespace

void run_bfgs(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg) {
  const std::size_t n = x.size();
  quasi_newton(ev, std::move(x), cfg, DenseInverse(n));
}

void run_lbfgs(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg) {
  quasi_newton(ev, std::move(x), cfg, LimitedMemory(static_cast<std::size_t>(cfg.hp.lbfgs_memory)));
}

}  // namespace qaoa::opt::detail
