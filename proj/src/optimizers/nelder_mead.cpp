#include <algorithm>
#include <cmath>
#include <numeric>

#include "evaluator.hpp"

namespace qaoa::opt::detail {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

}  // namespace

void run_nelder_mead(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg) {
  const auto& hp = cfg.hp;
  const std::size_t n = x.size();
  const double fatol = std::max(hp.nm_fatol, cfg.noise_scale);
  for (;;) {
    std::vector<Vertex> simplex;
    simplex.push_back({x, ev.value(x)});
    for (std::size_t i = 0; i < n; ++i) {
      auto y = x;
      y[i] += hp.nm_initial_step;
      simplex.push_back({y, ev.value(y)});
    }

    for (;;) {
      std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
      double size = 0.0;
      for (std::size_t v = 1; v <= n; ++v)
        for (std::size_t i = 0; i < n; ++i) size = std::max(size, std::abs(simplex[v].x[i] - simplex[0].x[i]));
      if (simplex.back().f - simplex.front().f < fatol && (cfg.noise_scale > 0.0 || size < hp.nm_xatol)) break;

      std::vector<double> centroid(n, 0.0);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);
      const Vertex& worst = simplex.back();
      auto toward = [&](double t) {
        // centroid + t * (centroid - worst)
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + t * (centroid[i] - worst.x[i]);
        return p;
      };

      auto xr = toward(hp.nm_reflection);
      const double fr = ev.value(xr);
      if (fr < simplex.front().f) {
        auto xe = toward(hp.nm_reflection * hp.nm_expansion);
        const double fe = ev.value(xe);
        simplex.back() = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
        continue;
      }
      if (fr < simplex[n - 1].f) {
        simplex.back() = {std::move(xr), fr};
        continue;
      }
      if (fr < worst.f) {
        auto xc = toward(hp.nm_reflection * hp.nm_contraction);
        const double fc = ev.value(xc);
        if (fc <= fr) {
          simplex.back() = {std::move(xc), fc};
          continue;
        }
      } else {
        auto xc = toward(-hp.nm_contraction);
        const double fc = ev.value(xc);
        if (fc < worst.f) {
          simplex.back() = {std::move(xc), fc};
          continue;
        }
      }
      for (std::size_t v = 1; v <= n; ++v) {
        for (std::size_t i = 0; i < n; ++i) simplex[v].x[i] = simplex[0].x[i] + hp.nm_shrink * (simplex[v].x[i] - simplex[0].x[i]);
        simplex[v].f = ev.value(simplex[v].x);
      }
    }
    if (cfg.noise_scale == 0.0) return;
    x = ev.best_params();  // noisy objective: rebuild the simplex around the incumbent
  }
}

}  // namespace qaoa::opt::detail
