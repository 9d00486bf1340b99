#include "qaoa/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

#include "qaoa/error.hpp"

namespace qaoa {

namespace {
int log2_exact(std::size_t n) {
  require(n >= 2 && std::has_single_bit(n), "state dimension must be a power of two >= 2");
  return std::countr_zero(n);
}
}  // namespace

QuantumState QuantumState::pure_zero(int n_qubits) {
  require(n_qubits >= 1 && n_qubits <= 24, "pure state supports 1..24 qubits");
  std::vector<cplx> amps(std::size_t{1} << n_qubits);
  amps[0] = 1.0;
  return {Kind::Pure, n_qubits, std::move(amps)};
}

QuantumState QuantumState::mixed_zero(int n_qubits) {
  require(n_qubits >= 1 && n_qubits <= 12, "mixed state supports 1..12 qubits");
  std::vector<cplx> rho(std::size_t{1} << (2 * n_qubits));
  rho[0] = 1.0;
  return {Kind::Mixed, n_qubits, std::move(rho)};
}

QuantumState QuantumState::from_amplitudes(std::vector<cplx> amplitudes) {
  const int n = log2_exact(amplitudes.size());
  return {Kind::Pure, n, std::move(amplitudes)};
}

QuantumState QuantumState::from_density(std::vector<cplx> density) {
  const int two_n = log2_exact(density.size());
  require(two_n % 2 == 0, "density matrix must be square with power-of-two side");
  return {Kind::Mixed, two_n / 2, std::move(density)};
}

QuantumState QuantumState::to_mixed(const QuantumState& pure) {
  require(pure.is_pure(), "to_mixed expects a pure state");
  const std::size_t dim = pure.dim();
  std::vector<cplx> rho(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) rho[r * dim + c] = pure.data_[r] * std::conj(pure.data_[c]);
  }
  return {Kind::Mixed, pure.n_, std::move(rho)};
}

std::vector<double> QuantumState::probabilities() const {
  const std::size_t d = dim();
  std::vector<double> p(d);
  for (std::size_t i = 0; i < d; ++i) {
    p[i] = is_pure() ? std::norm(data_[i]) : std::max(0.0, data_[i * d + i].real());
  }
  return p;
}

PhysicalityReport check_physicality(const QuantumState& s) {
  PhysicalityReport report;
  const std::size_t d = s.dim();
  if (s.is_pure()) {
    double norm = 0.0;
    for (const auto& a : s.data()) norm += std::norm(a);
    report.trace_error = std::abs(norm - 1.0);
    report.min_eigenvalue = 1.0;
    return report;
  }
  Eigen::MatrixXcd rho(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  cplx trace{};
  for (std::size_t r = 0; r < d; ++r) {
    trace += s.rho(r, r);
    for (std::size_t c = 0; c < d; ++c) {
      rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s.rho(r, c);
      report.hermitian_error = std::max(report.hermitian_error, std::abs(s.rho(r, c) - std::conj(s.rho(c, r))));
    }
  }
  report.trace_error = std::abs(trace - cplx{1.0, 0.0});
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  return report;
}

}  // namespace qaoa
