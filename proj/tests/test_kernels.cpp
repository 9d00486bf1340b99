#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qaoa/kernels.hpp"

using namespace qaoa::kernels;

namespace {

std::vector<cplx> random_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> v(dim);
  for (auto& x : v) x = {n(rng), n(rng)};
  return v;
}

cplx random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.2, 3.2);
  return std::polar(1.0, u(rng));
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(scalar_table().name == "scalar");
  CHECK((&active() == &scalar_table() || &active() == avx2_table()));
}

TEST_CASE("SIMD kernels match the scalar reference") {
  const KernelTable* simd = avx2_table();
  if (!simd) {
    MESSAGE("AVX2 kernels unavailable on this CPU; equivalence not exercised");
    return;
  }
  const KernelTable& ref = scalar_table();
  std::mt19937_64 rng(99);
  constexpr double tol = 1e-12;

  for (int n = 1; n <= 8; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (int t = 0; t < n; ++t) {
      auto a = random_vector(dim, rng);
      auto b = a;
      const Mat2 m{random_unit(rng), random_unit(rng) * 0.3, random_unit(rng) * 0.7, random_unit(rng)};
      ref.apply_1q(a.data(), n, t, m);
      simd->apply_1q(b.data(), n, t, m);
      CHECK(max_diff(a, b) < tol);

      const cplx p0 = random_unit(rng), p1 = random_unit(rng);
      ref.apply_phase_1q(a.data(), n, t, p0, p1);
      simd->apply_phase_1q(b.data(), n, t, p0, p1);
      CHECK(max_diff(a, b) < tol);

      for (int u = 0; u < n; ++u) {
        if (u == t) continue;
        const cplx e = random_unit(rng), o = random_unit(rng);
        ref.apply_phase_zz(a.data(), n, t, u, e, o);
        simd->apply_phase_zz(b.data(), n, t, u, e, o);
        CHECK(max_diff(a, b) < tol);
      }
    }
    auto a = random_vector(dim, rng);
    std::vector<double> w(dim);
    std::uniform_real_distribution<double> u(-2.0, 5.0);
    for (auto& x : w) x = u(rng);
    CHECK(std::abs(ref.weighted_norm(a.data(), w.data(), dim) - simd->weighted_norm(a.data(), w.data(), dim)) < 1e-10);
  }

  // Density-matrix channels (2n-qubit storage).
  for (int n = 1; n <= 5; ++n) {
    const std::size_t size = std::size_t{1} << (2 * n);
    for (int t = 0; t < n; ++t) {
      auto a = random_vector(size, rng);
      auto b = a;
      ref.apply_block_channel_1q(a.data(), n, t, 0.9, 0.1, 0.05, 0.95, 0.8);
      simd->apply_block_channel_1q(b.data(), n, t, 0.9, 0.1, 0.05, 0.95, 0.8);
      CHECK(max_diff(a, b) < tol);
      for (int u = 0; u < n; ++u) {
        if (u == t) continue;
        ref.depolarize_2q(a.data(), n, t, u, 0.37);
        simd->depolarize_2q(b.data(), n, t, u, 0.37);
        CHECK(max_diff(a, b) < tol);
      }
    }
  }
}

TEST_CASE("set_active switches tables") {
  const KernelTable& before = active();
  set_active(scalar_table());
  CHECK(active().name == "scalar");
  set_active(before);
}
