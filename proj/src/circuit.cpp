#include "qaoa/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qaoa/error.hpp"

namespace qaoa {

void QaoaParams::validate() const {
  require(!gammas.empty(), "QAOA depth must be at least 1");
  require(gammas.size() == betas.size(), "gammas and betas must have equal length");
}

std::vector<double> QaoaParams::flatten() const {
  std::vector<double> flat(gammas);
  flat.insert(flat.end(), betas.begin(), betas.end());
  return flat;
}

QaoaParams QaoaParams::from_flat(std::span<const double> flat) {
  require(!flat.empty() && flat.size() % 2 == 0, "flat parameter vector must have even, nonzero length");
  const std::size_t p = flat.size() / 2;
  return {{flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(p)},
          {flat.begin() + static_cast<std::ptrdiff_t>(p), flat.end()}};
}

void Circuit::validate() const {
  require(n_qubits >= 1, "circuit needs at least one qubit");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.kind == GateKind::MeasureAll) {
      require(i + 1 == gates.size(), "MEASURE_ALL must be the last gate");
      continue;
    }
    require(g.q0 >= 0 && g.q0 < n_qubits, "gate " + std::to_string(i) + ": qubit out of range");
    if (g.kind == GateKind::RZZ) {
      require(g.q1 >= 0 && g.q1 < n_qubits && g.q1 != g.q0, "gate " + std::to_string(i) + ": bad second qubit");
    }
    require(std::isfinite(g.angle), "gate " + std::to_string(i) + ": non-finite angle");
  }
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

std::size_t Circuit::parameterized_count() const {
  return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.param >= 0; }));
}

Circuit build_qaoa_circuit(const IsingHamiltonian& h, const QaoaParams& params) {
  params.validate();
  require(h.linear.size() == static_cast<std::size_t>(h.n_qubits), "Hamiltonian linear size mismatch");
  const int n = h.n_qubits;
  const int p = params.depth();
  Circuit c;
  c.n_qubits = n;
  for (int q = 0; q < n; ++q) c.gates.push_back({GateKind::H, q});
  for (int k = 0; k < p; ++k) {
    const double gamma = params.gammas[static_cast<std::size_t>(k)];
    const double beta = params.betas[static_cast<std::size_t>(k)];
    for (int q = 0; q < n; ++q) {
      const double lin = h.linear[static_cast<std::size_t>(q)];
      if (lin == 0.0) continue;
      c.gates.push_back({GateKind::RZ, q, -1, 2.0 * gamma * lin, k, 2.0 * lin});
    }
    for (const auto& t : h.quadratic) {
      c.gates.push_back({GateKind::RZZ, t.u, t.v, 2.0 * gamma * t.coeff, k, 2.0 * t.coeff});
    }
    for (int q = 0; q < n; ++q) c.gates.push_back({GateKind::RX, q, -1, 2.0 * beta, p + k, 2.0});
  }
  return c;
}

}  // namespace qaoa
