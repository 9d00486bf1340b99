#include <cstdlib>
#include <vector>

#include "kernels_common.hpp"
#include "qaoa/kernels.hpp"

namespace qaoa::kernels {
namespace {

using detail::insert_zeros;

void apply_1q(cplx* amps, int n_qubits, int target, const Mat2& m) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t stride = std::size_t{1} << target;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t k = base; k < base + stride; ++k) {
      const cplx a = amps[k];
      const cplx b = amps[k + stride];
      amps[k] = m[0] * a + m[1] * b;
      amps[k + stride] = m[2] * a + m[3] * b;
    }
  }
}

void apply_phase_1q(cplx* amps, int n_qubits, int target, cplx phase0, cplx phase1) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  for (std::size_t i = 0; i < dim; ++i) amps[i] *= ((i >> target) & 1U) ? phase1 : phase0;
}

void apply_phase_zz(cplx* amps, int n_qubits, int q1, int q2, cplx even, cplx odd) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  for (std::size_t i = 0; i < dim; ++i) amps[i] *= (((i >> q1) ^ (i >> q2)) & 1U) ? odd : even;
}

double weighted_norm(const cplx* amps, const double* weights, std::size_t dim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim; ++i) sum += std::norm(amps[i]) * weights[i];
  return sum;
}

void apply_block_channel_1q(cplx* rho, int n_qubits, int target, double d00, double d01, double d10, double d11,
                            double s) {
  const int col_bit = target;
  const int row_bit = target + n_qubits;
  const std::size_t c = std::size_t{1} << col_bit;
  const std::size_t r = std::size_t{1} << row_bit;
  const std::size_t count = std::size_t{1} << (2 * n_qubits - 2);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i00 = insert_zeros<2>(k, {col_bit, row_bit});
    const cplx r00 = rho[i00];
    const cplx r11 = rho[i00 | r | c];
    rho[i00] = d00 * r00 + d01 * r11;
    rho[i00 | r | c] = d10 * r00 + d11 * r11;
    rho[i00 | c] *= s;
    rho[i00 | r] *= s;
  }
}

void depolarize_2q(cplx* rho, int n_qubits, int q1, int q2, double p) {
  const std::size_t c1 = std::size_t{1} << q1, c2 = std::size_t{1} << q2;
  const std::size_t r1 = c1 << n_qubits, r2 = c2 << n_qubits;
  const std::array<std::size_t, 4> rows{0, r1, r2, r1 | r2};
  const std::array<std::size_t, 4> cols{0, c1, c2, c1 | c2};
  const std::size_t count = std::size_t{1} << (2 * n_qubits - 4);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t base = insert_zeros<4>(k, {q1, q2, q1 + n_qubits, q2 + n_qubits});
    cplx trace{};
    for (int a = 0; a < 4; ++a) trace += rho[base | rows[a] | cols[a]];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        cplx& x = rho[base | rows[a] | cols[b]];
        x *= (1.0 - p);
        if (a == b) x += 0.25 * p * trace;
      }
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",          apply_1q,      apply_phase_1q, apply_phase_zz, weighted_norm,
                                 apply_block_channel_1q, depolarize_2q};
  return table;
}

}  // namespace qaoa::kernels
