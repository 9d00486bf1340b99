#include <algorithm>
#include <cmath>

#include "line_search.hpp"

namespace qaoa::opt::detail {

void run_powell(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg) {
  const std::size_t n = x.size();
  const double ftol = std::max(1e-10, cfg.noise_scale);
  const double line_tol = cfg.hp.powell_line_tol;
  constexpr double initial_step = 0.25;

  auto axes = [n] {
    std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;
    return dirs;
  };

  double fx = ev.value(x);
  auto dirs = axes();
  for (std::size_t iter = 1;; ++iter) {
    const auto x_start = x;
    const double f_start = fx;
    std::size_t biggest = 0;
    double biggest_drop = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double before = fx;
      auto p = brent_line_min(ev, x, fx, dirs[i], initial_step, line_tol);
      if (p.f < fx) {
        x = std::move(p.x);
        fx = p.f;
      }
      if (before - fx > biggest_drop) {
        biggest_drop = before - fx;
        biggest = i;
      }
    }

    if (2.0 * (f_start - fx) <= ftol * (std::abs(f_start) + std::abs(fx)) + 1e-20) {
      if (cfg.noise_scale == 0.0) return;
      x = ev.best_params();
      fx = ev.best_value();
      dirs = axes();
      continue;
    }

    std::vector<double> shift(n), extrapolated(n);
    for (std::size_t i = 0; i < n; ++i) {
      shift[i] = x[i] - x_start[i];
      extrapolated[i] = 2.0 * x[i] - x_start[i];
    }
    const double fe = ev.value(extrapolated);
    if (fe < f_start) {
      const double a = f_start - 2.0 * fx + fe;
      const double b = f_start - fx - biggest_drop;
      if (2.0 * a * b * b < biggest_drop * (f_start - fe) * (f_start - fe)) {
        auto p = brent_line_min(ev, x, fx, shift, 1.0, line_tol);
        if (p.f < fx) {
          x = std::move(p.x);
          fx = p.f;
        }
        dirs[biggest] = dirs.back();
        dirs.back() = shift;
      }
    }
    if (iter % n == 0) dirs = axes();
  }
}

}  // namespace qaoa::opt::detail
