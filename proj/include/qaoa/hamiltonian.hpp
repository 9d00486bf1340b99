#pragma once

#include <vector>

#include "qaoa/graph.hpp"

namespace qaoa {

/// Penalty A on each uncovered edge and weight B per selected vertex; requires a > b > 0.
struct PenaltyWeights {
  double a = 2.0;
  double b = 1.0;

  void validate() const;
};

struct QuadraticTerm {
  int u = 0;
  int v = 0;
  double coeff = 0.0;
};

/// Diagonal operator  constant + sum_i linear[i] Z_i + sum_(u,v) coeff Z_u Z_v.
/// Spin convention: bit 0 <-> Z = +1 <-> vertex not in cover.
struct IsingHamiltonian {
  int n_qubits = 0;
  double constant = 0.0;
  std::vector<double> linear;
  std::vector<QuadraticTerm> quadratic;  // sorted by (u, v), u < v
};

/// A * #(edges with both endpoints unselected) + B * popcount(z).
double classical_cost(const Graph& g, const PenaltyWeights& w, BitString z, int z_length);
double classical_cost(const Graph& g, const PenaltyWeights& w, const std::string& z);

IsingHamiltonian build_ising(const Graph& g, const PenaltyWeights& w);

/// Eigenvalue for each basis index (qubit 0 = least significant bit); n_qubits <= 20.
std::vector<double> diagonal(const IsingHamiltonian& h);

}  // namespace qaoa
