#include "qaoa/hamiltonian.hpp"

#include <bit>
#include <cstddef>

#include "qaoa/error.hpp"

namespace qaoa {

void PenaltyWeights::validate() const {
  require(b > 0.0 && a > b, "penalty weights need a > b > 0 (got a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

double classical_cost(const Graph& g, const PenaltyWeights& w, BitString z, int z_length) {
  require(z_length == g.n_vertices(), "bit string length " + std::to_string(z_length) + " does not match " +
                                          std::to_string(g.n_vertices()) + " vertices");
  int violated = 0;
  for (auto [u, v] : g.edges()) {
    if (!((z >> u) & 1U) && !((z >> v) & 1U)) ++violated;
  }
  return w.a * violated + w.b * std::popcount(z);
}

double classical_cost(const Graph& g, const PenaltyWeights& w, const std::string& z) {
  return classical_cost(g, w, from_bits(z), static_cast<int>(z.size()));
}

IsingHamiltonian build_ising(const Graph& g, const PenaltyWeights& w) {
  w.validate();
  const int n = g.n_vertices();
  // x = (1 - z)/2:  A(1-x_u)(1-x_v) = A/4 (1 + z_u)(1 + z_v),  B x_v = B/2 (1 - z_v).
  IsingHamiltonian h;
  h.n_qubits = n;
  h.constant = w.a * static_cast<double>(g.n_edges()) / 4.0 + w.b * n / 2.0;
  const auto deg = g.degrees();
  h.linear.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) h.linear[static_cast<std::size_t>(v)] = w.a * deg[static_cast<std::size_t>(v)] / 4.0 - w.b / 2.0;
  for (auto [u, v] : g.edges()) h.quadratic.push_back({u, v, w.a / 4.0});
  return h;
}

std::vector<double> diagonal(const IsingHamiltonian& h) {
  require(h.n_qubits >= 0 && h.n_qubits <= 20, "diagonal supports at most 20 qubits");
  require(h.linear.size() == static_cast<std::size_t>(h.n_qubits), "linear coefficient count mismatch");
  const std::size_t dim = std::size_t{1} << h.n_qubits;
  std::vector<double> d(dim, h.constant);
  for (std::size_t z = 0; z < dim; ++z) {
    double e = h.constant;
    for (int i = 0; i < h.n_qubits; ++i) e += ((z >> i) & 1U) ? -h.linear[static_cast<std::size_t>(i)] : h.linear[static_cast<std::size_t>(i)];
    for (const auto& t : h.quadratic) e += (((z >> t.u) ^ (z >> t.v)) & 1U) ? -t.coeff : t.coeff;
    d[z] = e;
  }
  return d;
}

}  // namespace qaoa
