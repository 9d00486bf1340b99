#include <cmath>
#include <random>

#include "evaluator.hpp"
#include "qaoa/error.hpp"
#include "qaoa/rng.hpp"

namespace qaoa::opt {

std::vector<double> spsa_gradient_estimate(const ObjectiveFn& f, std::span<const double> x, double c_k,
                                           std::uint64_t seed) {
  require(c_k > 0.0, "SPSA perturbation size must be > 0");
  std::mt19937_64 rng(seed);
  std::vector<double> delta(x.size());
  for (auto& d : delta) d = (rng() >> 63) ? 1.0 : -1.0;
  const double plus = f(detail::axpy(x, c_k, delta));
  const double minus = f(detail::axpy(x, -c_k, delta));
  const double scale = (plus - minus) / (2.0 * c_k);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = scale * delta[i];  // 1/delta_i == delta_i
  return g;
}

namespace detail {

void run_spsa(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg) {
  const auto& hp = cfg.hp;
  // Candidates are the start and the final iterate; the two probes per iteration only feed the
  // gradient estimate.
  ev.value(x);
  const std::size_t iterations = std::max<std::size_t>(1, (ev.budget() - ev.used() - 1) / 2);
  const double stability = hp.spsa_stability * static_cast<double>(iterations);
  const ObjectiveFn counted = [&ev](std::span<const double> p) { return ev.probe(p); };
  for (std::size_t k = 0; k < iterations && ev.can_afford(3); ++k) {
    const double kk = static_cast<double>(k);
    const double a_k = hp.spsa_a / std::pow(kk + 1.0 + stability, hp.spsa_alpha);
    const double c_k = hp.spsa_c / std::pow(kk + 1.0, hp.spsa_gamma);
    const auto g = spsa_gradient_estimate(counted, x, c_k, derive_seed(cfg.seed, k));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= a_k * g[i];
  }
  ev.value(x);
}

}  // namespace detail
}  // namespace qaoa::opt
