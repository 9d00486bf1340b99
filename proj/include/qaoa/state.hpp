#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qaoa {

using cplx = std::complex<double>;

/// Either a 2^n amplitude vector (pure) or a row-major 2^n x 2^n density matrix (mixed).
class QuantumState {
 public:
  enum class Kind { Pure, Mixed };

  /// |0...0> as a state vector.
  static QuantumState pure_zero(int n_qubits);
  /// |0...0><0...0| as a density matrix.
  static QuantumState mixed_zero(int n_qubits);
  static QuantumState from_amplitudes(std::vector<cplx> amplitudes);
  static QuantumState from_density(std::vector<cplx> density);
  /// Outer product |psi><psi| of a pure state.
  static QuantumState to_mixed(const QuantumState& pure);

  Kind kind() const noexcept { return kind_; }
  bool is_pure() const noexcept { return kind_ == Kind::Pure; }
  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_; }

  std::vector<cplx>& data() noexcept { return data_; }
  const std::vector<cplx>& data() const noexcept { return data_; }

  /// Computational-basis distribution (density diagonal, negative round-off clipped to 0).
  std::vector<double> probabilities() const;

  /// Density entry (row, col); only for mixed states.
  cplx rho(std::size_t row, std::size_t col) const { return data_[(row << n_) | col]; }

 private:
  QuantumState(Kind kind, int n, std::vector<cplx> data) : kind_(kind), n_(n), data_(std::move(data)) {}

  Kind kind_ = Kind::Pure;
  int n_ = 0;
  std::vector<cplx> data_;
};

/// Deviation of a state from physicality.
struct PhysicalityReport {
  double trace_error = 0.0;      // |tr(rho) - 1| or |norm^2 - 1|
  double hermitian_error = 0.0;  // max |rho_ij - conj(rho_ji)|
  double min_eigenvalue = 0.0;   // smallest eigenvalue of rho (1 for pure states)

  bool ok(double tol = 1e-10, double eig_tol = 1e-9) const {
    return trace_error <= tol && hermitian_error <= tol && min_eigenvalue >= -eig_tol;
  }
};

PhysicalityReport check_physicality(const QuantumState& s);

}  // namespace qaoa
