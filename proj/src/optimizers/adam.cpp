#include <cmath>

#include "evaluator.hpp"

namespace qaoa::opt::detail {

// ADAM, and AMSGRAD when `amsgrad` keeps the running maximum of the bias-corrected second moment.
void run_adam(Evaluator& ev, std::vector<double> x, const OptimizerConfig& cfg, bool amsgrad) {
  const auto& hp = cfg.hp;
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0), v(n, 0.0), v_max(n, 0.0);
  double beta1_t = 1.0, beta2_t = 1.0;
  ev.value(x);
  for (;;) {
    const auto g = ev.gradient(x);
    if (cfg.noise_scale == 0.0 && max_abs(g) < hp.gtol) return;
    beta1_t *= hp.beta1;
    beta2_t *= hp.beta2;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = hp.beta1 * m[i] + (1.0 - hp.beta1) * g[i];
      v[i] = hp.beta2 * v[i] + (1.0 - hp.beta2) * g[i] * g[i];
      const double m_hat = m[i] / (1.0 - beta1_t);
      double v_hat = v[i] / (1.0 - beta2_t);
      if (amsgrad) {
        v_max[i] = std::max(v_max[i], v_hat);
        v_hat = v_max[i];
      }
      x[i] -= hp.learning_rate * m_hat / (std::sqrt(v_hat) + hp.epsilon);
    }
    ev.value(x);
  }
}

}  // namespace qaoa::opt::detail
