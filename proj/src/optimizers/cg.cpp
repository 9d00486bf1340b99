#include <algorithm>
#include <cmath>

#include "line_search.hpp"

namespace qaoa::opt::detail {

// Polak-Ribiere+ conjugate gradient with Armijo backtracking.
void run_cg(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg) {
  const std::size_t n = x.size();
  const double gtol = std::max(cfg.hp.gtol, cfg.noise_scale);
  const bool noisy = cfg.noise_scale > 0.0;

  double fx = 0.0, alpha = 1.0, prev_slope = 0.0;
  std::vector<double> g, d(n);
  bool steepest = true;
  auto restart = [&](std::vector<double> from, double f_from) {
    x = std::move(from);
    fx = f_from;
    g = ev.gradient(x);
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    alpha = 1.0 / std::max(1.0, max_abs(g));
    prev_slope = 0.0;
    steepest = true;
  };
  restart(x, ev.value(x));

  for (std::size_t k = 0;; ++k) {
    if (max_abs(g) < gtol) {
      if (!noisy) return;
      restart(ev.best_params(), ev.best_value());
      continue;
    }
    double slope = dot(g, d);
    if (slope >= 0.0) {
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = -dot(g, g);
      steepest = true;
    }
    if (prev_slope != 0.0) alpha = std::clamp(alpha * prev_slope / slope, 1e-8, 1e3);

    LinePoint step;
    if (!backtracking(ev, x, fx, slope, d, alpha, cfg.hp.armijo_c1, step)) {
      if (steepest && !noisy) return;
      restart(ev.best_params(), ev.best_value());
      continue;
    }
    alpha = step.alpha;
    prev_slope = slope;
    x = std::move(step.x);
    fx = step.f;
    auto g_new = ev.gradient(x);
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += g_new[i] * (g_new[i] - g[i]);
    const double gg = dot(g, g);
    const double beta = (k + 1) % n == 0 || gg == 0.0 ? 0.0 : std::max(0.0, num / gg);
    for (std::size_t i = 0; i < n; ++i) d[i] = -g_new[i] + beta * d[i];
    steepest = beta == 0.0;
    g = std::move(g_new);
  }
}

}  // namespace qaoa::opt::detail
