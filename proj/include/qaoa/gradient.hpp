#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qaoa/circuit.hpp"
#include "qaoa/noise.hpp"
#include "qaoa/simulator.hpp"

namespace qaoa {

enum class Backend { Statevector, Shots, Noisy };

std::string backend_name(Backend b);  // "statevector", "shots", "noisy"
Backend parse_backend(const std::string& name);

/// F_p(gamma, beta) for one instance on one backend. Each circuit execution is tagged with an
/// evaluation index; shot-based backends seed their sampler from (base seed, index), so a call
/// with the same parameters and index is bit-reproducible.
class QaoaObjective {
 public:
  QaoaObjective(Graph graph, PenaltyWeights weights, int depth, Backend backend, std::uint64_t shots = 10000,
                std::uint64_t seed = 0, NoiseModel noise = NoiseModel::ideal());

  std::size_t dimension() const noexcept { return 2 * static_cast<std::size_t>(depth_); }
  int depth() const noexcept { return depth_; }
  Backend backend() const noexcept { return backend_; }
  std::uint64_t shots() const noexcept { return shots_; }
  const Graph& graph() const noexcept { return graph_; }
  const PenaltyWeights& weights() const noexcept { return weights_; }
  const IsingHamiltonian& hamiltonian() const noexcept { return hamiltonian_; }
  const NoiseModel& noise() const noexcept { return noise_; }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }

  Circuit circuit(std::span<const double> flat_params) const;

  /// One execution of an explicit circuit on this backend.
  double evaluate(const Circuit& c, std::uint64_t eval_index) const;
  double operator()(std::span<const double> flat_params, std::uint64_t eval_index) const {
    return evaluate(circuit(flat_params), eval_index);
  }

  /// Final state without sampling: pure for statevector/shots, mixed for noisy.
  QuantumState final_state(std::span<const double> flat_params) const;
  /// Exact expectation of final_state (no shot noise).
  double exact_expectation(std::span<const double> flat_params) const;

  /// Circuit executions in one parameter-shift gradient: 2 per parameterized gate.
  std::size_t gradient_cost() const noexcept { return gradient_cost_; }

  /// Shot-noise scale of one evaluation (0 on the statevector backend).
  double noise_scale() const noexcept;

 private:
  Graph graph_;
  PenaltyWeights weights_;
  int depth_;
  Backend backend_;
  std::uint64_t shots_;
  std::uint64_t seed_;
  NoiseModel noise_;
  IsingHamiltonian hamiltonian_;
  std::vector<double> diagonal_;
  std::size_t gradient_cost_ = 0;
};

/// Exact gradient via per-gate +-pi/2 shifts, summed over the gates sharing each parameter:
///   dF/dtheta = sum_j coeff_j * (F(angle_j + pi/2) - F(angle_j - pi/2)) / 2.
/// Shifted executions use evaluation indices first_eval_index, first_eval_index + 1, ... in gate
/// order (plus before minus).
std::vector<double> parameter_shift_grad(const QaoaObjective& obj, std::span<const double> flat_params,
                                         std::uint64_t first_eval_index = 0);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
std::vector<double> finite_difference_grad(const std::function<double(std::span<const double>)>& f,
                                           std::span<const double> x, double h);

}  // namespace qaoa
