#include "qaoa/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <vector>

#include "kernels_common.hpp"

// Functions carry target attributes instead of compiling the TU with -mavx2, so no inline
// library code emitted here can leak AVX2 instructions into the scalar path.
#define QAOA_AVX2 __attribute__((target("avx2,fma")))

namespace qaoa::kernels {
namespace {

using detail::insert_zero;

QAOA_AVX2 inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
QAOA_AVX2 inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// Lane-wise complex product of two packed complex numbers with coefficients (re, im).
QAOA_AVX2 inline __m256d cmul(__m256d v, __m256d re, __m256d im) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(v, re, _mm256_mul_pd(swapped, im));
}

QAOA_AVX2 inline __m256d broadcast_re(cplx lo, cplx hi) { return _mm256_setr_pd(lo.real(), lo.real(), hi.real(), hi.real()); }
QAOA_AVX2 inline __m256d broadcast_im(cplx lo, cplx hi) { return _mm256_setr_pd(lo.imag(), lo.imag(), hi.imag(), hi.imag()); }

QAOA_AVX2 inline __m256d swap_halves(__m256d v) { return _mm256_permute2f128_pd(v, v, 0x01); }

QAOA_AVX2 void apply_1q(cplx* amps, int n_qubits, int target, const Mat2& m) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (target == 0) {
    const __m256d dre = broadcast_re(m[0], m[3]), dim_ = broadcast_im(m[0], m[3]);
    const __m256d xre = broadcast_re(m[1], m[2]), xim = broadcast_im(m[1], m[2]);
    for (std::size_t k = 0; k < dim; k += 2) {
      const __m256d v = load2(amps + k);
      store2(amps + k, _mm256_add_pd(cmul(v, dre, dim_), cmul(swap_halves(v), xre, xim)));
    }
    return;
  }
  const std::size_t stride = std::size_t{1} << target;
  const __m256d re0 = _mm256_set1_pd(m[0].real()), im0 = _mm256_set1_pd(m[0].imag());
  const __m256d re1 = _mm256_set1_pd(m[1].real()), im1 = _mm256_set1_pd(m[1].imag());
  const __m256d re2 = _mm256_set1_pd(m[2].real()), im2 = _mm256_set1_pd(m[2].imag());
  const __m256d re3 = _mm256_set1_pd(m[3].real()), im3 = _mm256_set1_pd(m[3].imag());
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t k = base; k < base + stride; k += 2) {
      const __m256d a = load2(amps + k);
      const __m256d b = load2(amps + k + stride);
      store2(amps + k, _mm256_add_pd(cmul(a, re0, im0), cmul(b, re1, im1)));
      store2(amps + k + stride, _mm256_add_pd(cmul(a, re2, im2), cmul(b, re3, im3)));
    }
  }
}

QAOA_AVX2 void apply_phase_1q(cplx* amps, int n_qubits, int target, cplx phase0, cplx phase1) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (target == 0) {
    const __m256d re = broadcast_re(phase0, phase1), im = broadcast_im(phase0, phase1);
    for (std::size_t k = 0; k < dim; k += 2) store2(amps + k, cmul(load2(amps + k), re, im));
    return;
  }
  const __m256d re0 = _mm256_set1_pd(phase0.real()), im0 = _mm256_set1_pd(phase0.imag());
  const __m256d re1 = _mm256_set1_pd(phase1.real()), im1 = _mm256_set1_pd(phase1.imag());
  for (std::size_t k = 0; k < dim; k += 2) {
    const bool set = (k >> target) & 1U;
    store2(amps + k, cmul(load2(amps + k), set ? re1 : re0, set ? im1 : im0));
  }
}

QAOA_AVX2 void apply_phase_zz(cplx* amps, int n_qubits, int q1, int q2, cplx even, cplx odd) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (q1 == 0 || q2 == 0) {
    const int other = q1 == 0 ? q2 : q1;
    // Lane 1 has bit 0 set, so its parity is the opposite of lane 0.
    const __m256d re_eo = broadcast_re(even, odd), im_eo = broadcast_im(even, odd);
    const __m256d re_oe = broadcast_re(odd, even), im_oe = broadcast_im(odd, even);
    for (std::size_t k = 0; k < dim; k += 2) {
      const bool flip = (k >> other) & 1U;
      store2(amps + k, cmul(load2(amps + k), flip ? re_oe : re_eo, flip ? im_oe : im_eo));
    }
    return;
  }
  const __m256d re_e = _mm256_set1_pd(even.real()), im_e = _mm256_set1_pd(even.imag());
  const __m256d re_o = _mm256_set1_pd(odd.real()), im_o = _mm256_set1_pd(odd.imag());
  for (std::size_t k = 0; k < dim; k += 2) {
    const bool par = ((k >> q1) ^ (k >> q2)) & 1U;
    store2(amps + k, cmul(load2(amps + k), par ? re_o : re_e, par ? im_o : im_e));
  }
}

QAOA_AVX2 double weighted_norm(const cplx* amps, const double* weights, std::size_t dim) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= dim; k += 2) {
    const __m256d v = load2(amps + k);
    const __m128d w = _mm_loadu_pd(weights + k);
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(w), 0b01010000);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), ww, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; k < dim; ++k) sum += std::norm(amps[k]) * weights[k];
  return sum;
}

QAOA_AVX2 void apply_block_channel_1q(cplx* rho, int n_qubits, int target, double d00, double d01, double d10,
                                      double d11, double s) {
  const int col_bit = target;
  const int row_bit = target + n_qubits;
  const std::size_t c = std::size_t{1} << col_bit;
  const std::size_t r = std::size_t{1} << row_bit;
  const std::size_t count = std::size_t{1} << (2 * n_qubits - 2);
  if (target == 0) {
    const __m256d w0_self = _mm256_setr_pd(d00, d00, s, s), w0_cross = _mm256_setr_pd(d01, d01, 0.0, 0.0);
    const __m256d w1_self = _mm256_setr_pd(s, s, d11, d11), w1_cross = _mm256_setr_pd(0.0, 0.0, d10, d10);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t i00 = insert_zero(insert_zero(k, col_bit), row_bit);
      const __m256d w0 = load2(rho + i00);      // [r00, r01]
      const __m256d w1 = load2(rho + (i00 | r));  // [r10, r11]
      store2(rho + i00, _mm256_fmadd_pd(swap_halves(w1), w0_cross, _mm256_mul_pd(w0, w0_self)));
      store2(rho + (i00 | r), _mm256_fmadd_pd(swap_halves(w0), w1_cross, _mm256_mul_pd(w1, w1_self)));
    }
    return;
  }
  const __m256d v_d00 = _mm256_set1_pd(d00), v_d01 = _mm256_set1_pd(d01);
  const __m256d v_d10 = _mm256_set1_pd(d10), v_d11 = _mm256_set1_pd(d11), v_s = _mm256_set1_pd(s);
  for (std::size_t k = 0; k < count; k += 2) {
    const std::size_t i00 = insert_zero(insert_zero(k, col_bit), row_bit);
    const __m256d r00 = load2(rho + i00);
    const __m256d r11 = load2(rho + (i00 | r | c));
    store2(rho + i00, _mm256_fmadd_pd(v_d01, r11, _mm256_mul_pd(v_d00, r00)));
    store2(rho + (i00 | r | c), _mm256_fmadd_pd(v_d11, r11, _mm256_mul_pd(v_d10, r00)));
    store2(rho + (i00 | c), _mm256_mul_pd(v_s, load2(rho + (i00 | c))));
    store2(rho + (i00 | r), _mm256_mul_pd(v_s, load2(rho + (i00 | r))));
  }
}

QAOA_AVX2 void depolarize_2q(cplx* rho, int n_qubits, int q1, int q2, double p) {
  const int lo = q1 < q2 ? q1 : q2;
  const int hi = q1 < q2 ? q2 : q1;
  const std::size_t c1 = std::size_t{1} << q1, c2 = std::size_t{1} << q2;
  const std::size_t r1 = c1 << n_qubits, r2 = c2 << n_qubits;
  const std::size_t diag_offsets[4] = {0, r1 | c1, r2 | c2, r1 | r2 | c1 | c2};
  const std::size_t count = std::size_t{1} << (2 * n_qubits - 4);
  auto base_of = [&](std::size_t k) {
    return insert_zero(insert_zero(insert_zero(insert_zero(k, lo), hi), lo + n_qubits), hi + n_qubits);
  };

  std::vector<cplx> traces(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t base = base_of(k);
    traces[k] = rho[base | diag_offsets[0]] + rho[base | diag_offsets[1]] + rho[base | diag_offsets[2]] +
                rho[base | diag_offsets[3]];
  }

  const std::size_t total = std::size_t{1} << (2 * n_qubits);
  const __m256d keep = _mm256_set1_pd(1.0 - p);
  for (std::size_t k = 0; k < total; k += 2) store2(rho + k, _mm256_mul_pd(keep, load2(rho + k)));

  const double share = 0.25 * p;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t base = base_of(k);
    for (std::size_t off : diag_offsets) rho[base | off] += share * traces[k];
  }
}

}  // namespace

namespace detail {
const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{"avx2",          apply_1q,      apply_phase_1q, apply_phase_zz, weighted_norm,
                                 apply_block_channel_1q, depolarize_2q};
  return table;
}
bool avx2_compiled() { return true; }
}  // namespace detail

}  // namespace qaoa::kernels

#else

namespace qaoa::kernels::detail {
const KernelTable& avx2_table_unchecked() { return scalar_table(); }
bool avx2_compiled() { return false; }
}  // namespace qaoa::kernels::detail

#endif
