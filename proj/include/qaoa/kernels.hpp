#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>

// Inner loops of the simulators. Every kernel has a portable scalar reference in
// kernels_scalar.cpp and, where the CPU supports it, an AVX2+FMA variant in kernels_avx2.cpp.
// The active table is chosen once at startup; QAOA_KERNELS=scalar|avx2 overrides the choice.
//
// Amplitude arrays are indexed by basis state with qubit 0 as the least significant bit.
// Density matrices are stored row-major and treated as a 2n-qubit vector: column bits are
// qubits [0, n) and row bits are qubits [n, 2n).

namespace qaoa::kernels {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major {m00, m01, m10, m11}

struct KernelTable {
  std::string_view name;

  /// amps <- (I (x) m (x) I) amps on `target`.
  void (*apply_1q)(cplx* amps, int n_qubits, int target, const Mat2& m);

  /// Multiplies by phase0 where bit `target` is 0 and phase1 where it is 1.
  void (*apply_phase_1q)(cplx* amps, int n_qubits, int target, cplx phase0, cplx phase1);

  /// Multiplies by `even` where bits q1 and q2 agree and `odd` where they differ.
  void (*apply_phase_zz)(cplx* amps, int n_qubits, int q1, int q2, cplx even, cplx odd);

  /// sum_i |amps[i]|^2 * weights[i].
  double (*weighted_norm)(const cplx* amps, const double* weights, std::size_t dim);

  /// Single-qubit channel on `target` of an n-qubit density matrix that keeps the 2x2 block
  /// structure [[r00, r01], [r10, r11]]:
  ///   r00 <- d00*r00 + d01*r11,  r11 <- d10*r00 + d11*r11,  r01, r10 <- s*r01, s*r10.
  /// Covers depolarizing, amplitude damping and dephasing.
  void (*apply_block_channel_1q)(cplx* rho, int n_qubits, int target, double d00, double d01, double d10,
                                 double d11, double s);

  /// rho <- (1-p) rho + p * (I/4 (x) Tr_{q1,q2} rho).
  void (*depolarize_2q)(cplx* rho, int n_qubits, int q1, int q2, double p);
};

const KernelTable& scalar_table();
/// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2_table();

/// Table used by the simulators.
const KernelTable& active();
/// Forces a table (tests and benchmarks). Not thread-safe against concurrent simulation.
void set_active(const KernelTable& table);

}  // namespace qaoa::kernels
