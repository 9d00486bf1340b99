#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qaoa/circuit.hpp"
#include "qaoa/noise.hpp"
#include "qaoa/state.hpp"

namespace qaoa {

inline constexpr int kMaxStatevectorQubits = 20;
inline constexpr int kMaxDensityQubits = 10;

/// Applies every gate to |0...0>. MEASURE_ALL is a no-op here.
QuantumState run_statevector(const Circuit& c);

/// Density-matrix evolution from |0...0><0...0|. After each gate: depolarizing (p1 or p2) on
/// its qubits, then thermal relaxation over the gate duration on each of them.
QuantumState run_density_matrix(const Circuit& c, const NoiseModel& noise);

/// Unitary of one gate on a pure or mixed state.
void apply_gate(QuantumState& s, const Gate& g);

/// rho <- (1-p) rho + p (I/2^k (x) Tr_targets rho) for k = 1 or 2 targets.
void apply_depolarizing(QuantumState& s, std::span<const int> qubits, double prob);

/// Amplitude damping with gamma = 1 - exp(-duration/t1) followed by pure dephasing chosen so
/// the off-diagonal decay totals exp(-duration/t2). Requires t2 <= 2 t1; times share a unit.
void apply_thermal_relaxation(QuantumState& s, int qubit, double t1, double t2, double duration);

double expectation_exact(const QuantumState& s, const IsingHamiltonian& h);
/// Same, against a precomputed diagonal(h).
double expectation_exact(const QuantumState& s, std::span<const double> diag);

/// Histogram over basis indices (qubit 0 = least significant bit).
struct ShotCounts {
  int n_qubits = 0;
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> counts;  // size 2^n

  /// Nonzero outcomes keyed by bit string (vertex 0 first).
  std::map<std::string, std::uint64_t> to_map() const;
};

/// Draws `shots` basis outcomes from s. With `readout`, each measured bit is flipped according to
/// its qubit's confusion matrix. Deterministic for a fixed seed.
ShotCounts sample(const QuantumState& s, std::uint64_t shots, const std::vector<ReadoutError>* readout,
                  std::uint64_t seed);

/// Same draw from an explicit distribution over basis states.
ShotCounts sample_distribution(std::span<const double> probabilities, int n_qubits, std::uint64_t shots,
                               const std::vector<ReadoutError>* readout, std::uint64_t seed);

/// Folds independent per-qubit readout flips into a basis distribution.
std::vector<double> apply_readout(std::span<const double> probabilities, int n_qubits,
                                  const std::vector<ReadoutError>& readout);

double expectation_from_counts(const ShotCounts& counts, const Graph& g, const PenaltyWeights& w);
/// Same, against a precomputed cost table indexed by bit string.
double expectation_from_counts(const ShotCounts& counts, std::span<const double> costs);

/// Probability mass on `targets` (e.g. the optimal covers).
double success_probability(const QuantumState& s, std::span<const BitString> targets);
double success_probability(const ShotCounts& counts, std::span<const BitString> targets);

}  // namespace qaoa
