#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qaoa/error.hpp"
#include "qaoa/hamiltonian.hpp"
#include "test_support.hpp"

using namespace qaoa;
using namespace qaoa::testing;

TEST_CASE("classical_cost") {
  const PenaltyWeights w{2.0, 1.0};
  CHECK(classical_cost(cycle5(), w, "00000") == 10.0);
  CHECK(classical_cost(cycle5(), w, "11111") == 5.0);
  CHECK(classical_cost(triangle(), w, "110") == 2.0);
  CHECK_THROWS_AS(classical_cost(triangle(), w, "11"), ContractViolation);
}

TEST_CASE("build_ising coefficients") {
  const PenaltyWeights w{2.0, 1.0};
  SUBCASE("triangle") {
    const auto h = build_ising(triangle(), w);
    CHECK(h.constant == doctest::Approx(3.0));
    for (double l : h.linear) CHECK(l == doctest::Approx(0.5));
    REQUIRE(h.quadratic.size() == 3);
    for (const auto& t : h.quadratic) CHECK(t.coeff == doctest::Approx(0.5));
    const auto d = diagonal(h);
    CHECK(d[0] == doctest::Approx(6.0));
    CHECK(d[7] == doctest::Approx(3.0));
  }
  SUBCASE("single edge has exactly zero linear terms") {
    const auto h = build_ising(single_edge(), w);
    CHECK(h.constant == doctest::Approx(1.5));
    CHECK(h.linear == std::vector<double>{0.0, 0.0});
    CHECK(h.quadratic.at(0).coeff == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(build_ising(triangle(), PenaltyWeights{1.0, 1.0}), ContractViolation);
  CHECK_THROWS_AS(build_ising(triangle(), PenaltyWeights{1.0, 0.0}), ContractViolation);
}

TEST_CASE("zero Hamiltonian has zero diagonal") {
  IsingHamiltonian h;
  h.n_qubits = 3;
  h.linear.assign(3, 0.0);
  for (double d : diagonal(h)) CHECK(d == 0.0);
  h.n_qubits = 21;
  h.linear.assign(21, 0.0);
  CHECK_THROWS_AS(diagonal(h), ContractViolation);
}

TEST_CASE("diagonal matches classical cost and argmin matches cover oracle") {
  for (const PenaltyWeights w : {PenaltyWeights{2.0, 1.0}, PenaltyWeights{3.5, 0.7}}) {
    for (const auto& g : enumerate_connected_graphs(5)) {
      const auto d = diagonal(build_ising(g, w));
      for (BitString z = 0; z < 32; ++z) CHECK(std::abs(d[z] - classical_cost(g, w, z, 5)) < 1e-12);

      const double lo = *std::min_element(d.begin(), d.end());
      std::vector<BitString> argmin;
      for (BitString z = 0; z < 32; ++z)
        if (std::abs(d[z] - lo) < 1e-9) argmin.push_back(z);
      const auto sol = min_vertex_covers(g);
      CHECK(argmin == sol.covers);
      CHECK(lo == doctest::Approx(w.b * sol.size));
      CHECK(*std::max_element(d.begin(), d.end()) == doctest::Approx(w.a * static_cast<double>(g.n_edges())));
    }
  }
}
