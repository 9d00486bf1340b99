#include "qaoa/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qaoa/error.hpp"
#include "qaoa/rng.hpp"

namespace qaoa {

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Statevector:
      return "statevector";
    case Backend::Shots:
      return "shots";
    case Backend::Noisy:
      return "noisy";
  }
  return "?";
}

Backend parse_backend(const std::string& name) {
  if (name == "statevector") return Backend::Statevector;
  if (name == "shots") return Backend::Shots;
  if (name == "noisy") return Backend::Noisy;
  throw ContractViolation("unknown backend '" + name + "' (valid: statevector, shots, noisy)");
}

QaoaObjective::QaoaObjective(Graph graph, PenaltyWeights weights, int depth, Backend backend, std::uint64_t shots,
                             std::uint64_t seed, NoiseModel noise)
    : graph_(std::move(graph)),
      weights_(weights),
      depth_(depth),
      backend_(backend),
      shots_(shots),
      seed_(seed),
      noise_(std::move(noise)) {
  require(depth_ >= 1, "depth must be >= 1");
  require(backend_ == Backend::Statevector || shots_ >= 1, "shot-based backends need shots >= 1");
  if (backend_ == Backend::Noisy) noise_.validate_for(graph_.n_vertices());
  hamiltonian_ = build_ising(graph_, weights_);
  diagonal_ = qaoa::diagonal(hamiltonian_);
  const std::vector<double> zeros(dimension(), 0.0);
  gradient_cost_ = 2 * circuit(zeros).parameterized_count();
}

Circuit QaoaObjective::circuit(std::span<const double> flat_params) const {
  require(flat_params.size() == dimension(), "expected " + std::to_string(dimension()) + " parameters");
  return build_qaoa_circuit(hamiltonian_, QaoaParams::from_flat(flat_params));
}

double QaoaObjective::evaluate(const Circuit& c, std::uint64_t eval_index) const {
  switch (backend_) {
    case Backend::Statevector:
      return expectation_exact(run_statevector(c), diagonal_);
    case Backend::Shots: {
      const auto counts = sample(run_statevector(c), shots_, nullptr, derive_seed(seed_, eval_index));
      return expectation_from_counts(counts, diagonal_);
    }
    case Backend::Noisy: {
      const auto* readout = noise_.has_readout_error() ? &noise_.readout : nullptr;
      const auto counts = sample(run_density_matrix(c, noise_), shots_, readout, derive_seed(seed_, eval_index));
      return expectation_from_counts(counts, diagonal_);
    }
  }
  return 0.0;
}

QuantumState QaoaObjective::final_state(std::span<const double> flat_params) const {
  const Circuit c = circuit(flat_params);
  return backend_ == Backend::Noisy ? run_density_matrix(c, noise_) : run_statevector(c);
}

double QaoaObjective::exact_expectation(std::span<const double> flat_params) const {
  return expectation_exact(final_state(flat_params), diagonal_);
}

double QaoaObjective::noise_scale() const noexcept {
  if (backend_ == Backend::Statevector) return 0.0;
  // Cost spread is bounded by the diagonal's range; use it as a conservative per-shot scale.
  double lo = diagonal_.front(), hi = diagonal_.front();
  for (double d : diagonal_) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return 0.5 * (hi - lo) / std::sqrt(static_cast<double>(shots_));
}

std::vector<double> parameter_shift_grad(const QaoaObjective& obj, std::span<const double> flat_params,
                                         std::uint64_t first_eval_index) {
  Circuit c = obj.circuit(flat_params);
  std::vector<double> grad(obj.dimension(), 0.0);
  std::uint64_t index = first_eval_index;
  constexpr double shift = std::numbers::pi / 2.0;
  for (auto& gate : c.gates) {
    if (gate.param < 0) continue;
    const double original = gate.angle;
    gate.angle = original + shift;
    const double plus = obj.evaluate(c, index++);
    gate.angle = original - shift;
    const double minus = obj.evaluate(c, index++);
    gate.angle = original;
    grad[static_cast<std::size_t>(gate.param)] += gate.coeff * 0.5 * (plus - minus);
  }
  return grad;
}

std::vector<double> finite_difference_grad(const std::function<double(std::span<const double>)>& f,
                                           std::span<const double> x, double h) {
  require(h > 0.0, "finite-difference step must be > 0");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    point[i] = x[i] + h;
    const double plus = f(point);
    point[i] = x[i] - h;
    const double minus = f(point);
    point[i] = x[i];
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

}  // namespace qaoa
