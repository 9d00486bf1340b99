#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qaoa/hamiltonian.hpp"

namespace qaoa {

/// QAOA angles for depth p = gammas.size() = betas.size().
struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  int depth() const noexcept { return static_cast<int>(gammas.size()); }
  void validate() const;

  /// Flat layout used by the optimizers: [gamma_1..gamma_p, beta_1..beta_p].
  std::vector<double> flatten() const;
  static QaoaParams from_flat(std::span<const double> flat);
};

enum class GateKind { H, RZ, RZZ, RX, MeasureAll };

/// Rotation gates follow R(theta) = exp(-i theta G / 2) with G in {Z, Z(x)Z, X}.
/// For gates generated from QaoaParams, angle = coeff * flat_params[param].
struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;
  double angle = 0.0;
  int param = -1;
  double coeff = 0.0;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  void validate() const;
  std::size_t count(GateKind kind) const;
  /// Gates tied to a trainable parameter.
  std::size_t parameterized_count() const;
};

/// H on every qubit, then per layer: RZ for nonzero linear terms, RZZ per quadratic term,
/// RX(2 beta) on every qubit. The Hamiltonian constant is a global phase and emits no gate.
Circuit build_qaoa_circuit(const IsingHamiltonian& h, const QaoaParams& params);

}  // namespace qaoa
