#include "qaoa/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qaoa/error.hpp"
#include "qaoa/kernels.hpp"

namespace qaoa {

namespace {

using kernels::Mat2;

Mat2 gate_matrix(const Gate& g) {
  const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
  switch (g.kind) {
    case GateKind::H: {
      const double r = 1.0 / std::numbers::sqrt2;
      return {cplx{r}, cplx{r}, cplx{r}, cplx{-r}};
    }
    case GateKind::RX:
      return {cplx{c}, cplx{0.0, -s}, cplx{0.0, -s}, cplx{c}};
    case GateKind::RZ:
      return {cplx{c, -s}, cplx{}, cplx{}, cplx{c, s}};
    default:
      throw ContractViolation("gate has no single-qubit matrix");
  }
}

Mat2 conj(const Mat2& m) { return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])}; }

void apply_noise_after(QuantumState& s, const Gate& g, const NoiseModel& noise) {
  if (g.kind == GateKind::MeasureAll) return;
  if (g.kind == GateKind::RZZ) {
    const int qs[2] = {g.q0, g.q1};
    if (noise.p2 > 0.0) apply_depolarizing(s, qs, noise.p2);
    for (int q : qs) {
      if (noise.dur_2q_ns > 0.0) apply_thermal_relaxation(s, q, noise.t1(q) * 1e3, noise.t2(q) * 1e3, noise.dur_2q_ns);
    }
    return;
  }
  const int qs[1] = {g.q0};
  if (noise.p1 > 0.0) apply_depolarizing(s, qs, noise.p1);
  if (noise.dur_1q_ns > 0.0) {
    apply_thermal_relaxation(s, g.q0, noise.t1(g.q0) * 1e3, noise.t2(g.q0) * 1e3, noise.dur_1q_ns);
  }
}

}  // namespace

void apply_gate(QuantumState& s, const Gate& g) {
  const auto& k = kernels::active();
  const int n = s.n_qubits();
  cplx* data = s.data().data();
  const bool mixed = !s.is_pure();
  switch (g.kind) {
    case GateKind::MeasureAll:
      return;
    case GateKind::RZ: {
      const cplx p0 = std::polar(1.0, -g.angle / 2.0), p1 = std::conj(p0);
      if (!mixed) {
        k.apply_phase_1q(data, n, g.q0, p0, p1);
      } else {
        k.apply_phase_1q(data, 2 * n, g.q0 + n, p0, p1);
        k.apply_phase_1q(data, 2 * n, g.q0, p1, p0);
      }
      return;
    }
    case GateKind::RZZ: {
      const cplx even = std::polar(1.0, -g.angle / 2.0), odd = std::conj(even);
      if (!mixed) {
        k.apply_phase_zz(data, n, g.q0, g.q1, even, odd);
      } else {
        k.apply_phase_zz(data, 2 * n, g.q0 + n, g.q1 + n, even, odd);
        k.apply_phase_zz(data, 2 * n, g.q0, g.q1, odd, even);
      }
      return;
    }
    default: {
      const Mat2 m = gate_matrix(g);
      if (!mixed) {
        k.apply_1q(data, n, g.q0, m);
      } else {
        k.apply_1q(data, 2 * n, g.q0 + n, m);
        k.apply_1q(data, 2 * n, g.q0, conj(m));
      }
    }
  }
}

QuantumState run_statevector(const Circuit& c) {
  require(c.n_qubits <= kMaxStatevectorQubits, "statevector backend supports at most 20 qubits");
  c.validate();
  QuantumState s = QuantumState::pure_zero(c.n_qubits);
  for (const Gate& g : c.gates) apply_gate(s, g);
  return s;
}

QuantumState run_density_matrix(const Circuit& c, const NoiseModel& noise) {
  require(c.n_qubits <= kMaxDensityQubits, "density-matrix backend supports at most 10 qubits");
  c.validate();
  noise.validate_for(c.n_qubits);
  QuantumState s = QuantumState::mixed_zero(c.n_qubits);
  for (const Gate& g : c.gates) {
    apply_gate(s, g);
    apply_noise_after(s, g, noise);
  }
  return s;
}

void apply_depolarizing(QuantumState& s, std::span<const int> qubits, double prob) {
  require(!s.is_pure(), "depolarizing channel needs a mixed state");
  require(prob >= 0.0 && prob <= 1.0, "depolarizing probability outside [0, 1]");
  const int n = s.n_qubits();
  for (int q : qubits) require(q >= 0 && q < n, "depolarizing target out of range");
  const auto& k = kernels::active();
  if (qubits.size() == 1) {
    const double keep = 1.0 - prob / 2.0, move = prob / 2.0;
    k.apply_block_channel_1q(s.data().data(), n, qubits[0], keep, move, move, keep, 1.0 - prob);
  } else if (qubits.size() == 2) {
    require(qubits[0] != qubits[1], "two-qubit depolarizing needs distinct targets");
    k.depolarize_2q(s.data().data(), n, qubits[0], qubits[1], prob);
  } else {
    throw ContractViolation("depolarizing supports 1 or 2 targets");
  }
}

void apply_thermal_relaxation(QuantumState& s, int qubit, double t1, double t2, double duration) {
  require(!s.is_pure(), "thermal relaxation needs a mixed state");
  require(t1 > 0.0 && t2 > 0.0, "relaxation times must be positive");
  require(std::isinf(t1) || t2 <= 2.0 * t1, "thermal relaxation requires t2 <= 2*t1");
  require(duration >= 0.0, "duration must be >= 0");
  require(qubit >= 0 && qubit < s.n_qubits(), "relaxation target out of range");
  if (duration == 0.0) return;
  const double gamma = std::isinf(t1) ? 0.0 : -std::expm1(-duration / t1);
  const double coherence = std::isinf(t2) ? 1.0 : std::exp(-duration / t2);
  kernels::active().apply_block_channel_1q(s.data().data(), s.n_qubits(), qubit, 1.0, gamma, 0.0, 1.0 - gamma,
                                           coherence);
}

double expectation_exact(const QuantumState& s, const IsingHamiltonian& h) {
  require(h.n_qubits == s.n_qubits(), "Hamiltonian and state dimensions differ");
  const auto d = diagonal(h);
  return expectation_exact(s, d);
}

double expectation_exact(const QuantumState& s, std::span<const double> diag) {
  const std::size_t dim = s.dim();
  require(diag.size() == dim, "diagonal length does not match state dimension");
  if (s.is_pure()) return kernels::active().weighted_norm(s.data().data(), diag.data(), dim);
  double e = 0.0;
  for (std::size_t z = 0; z < dim; ++z) e += s.rho(z, z).real() * diag[z];
  return e;
}

std::map<std::string, std::uint64_t> ShotCounts::to_map() const {
  std::map<std::string, std::uint64_t> out;
  for (std::size_t z = 0; z < counts.size(); ++z) {
    if (counts[z]) out.emplace(to_bits(static_cast<BitString>(z), n_qubits), counts[z]);
  }
  return out;
}

std::vector<double> apply_readout(std::span<const double> probabilities, int n_qubits,
                                  const std::vector<ReadoutError>& readout) {
  require(readout.size() == 1 || readout.size() == static_cast<std::size_t>(n_qubits),
          "readout confusion count must be 1 or n_qubits");
  std::vector<double> p(probabilities.begin(), probabilities.end());
  for (int q = 0; q < n_qubits; ++q) {
    const auto& r = readout.size() == 1 ? readout[0] : readout[static_cast<std::size_t>(q)];
    if (r.p01 == 0.0 && r.p10 == 0.0) continue;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t z = 0; z < p.size(); ++z) {
      if (z & bit) continue;
      const double true0 = p[z], true1 = p[z | bit];
      p[z] = true0 * (1.0 - r.p01) + true1 * r.p10;
      p[z | bit] = true0 * r.p01 + true1 * (1.0 - r.p10);
    }
  }
  return p;
}

ShotCounts sample_distribution(std::span<const double> probabilities, int n_qubits, std::uint64_t shots,
                               const std::vector<ReadoutError>* readout, std::uint64_t seed) {
  require(shots >= 1, "shots must be >= 1");
  require(probabilities.size() == (std::size_t{1} << n_qubits), "distribution size mismatch");
  std::vector<double> p = readout ? apply_readout(probabilities, n_qubits, *readout)
                                  : std::vector<double>(probabilities.begin(), probabilities.end());
  double total = 0.0;
  for (double& x : p) {
    x = std::max(0.0, x);
    total += x;
  }
  require(total > 0.0, "distribution has no mass");

  // Multinomial draw as a chain of conditional binomials: same law as `shots` categorical draws.
  ShotCounts out{n_qubits, shots, std::vector<std::uint64_t>(p.size(), 0)};
  std::mt19937_64 rng(seed);
  std::uint64_t remaining = shots;
  double mass_left = total;
  for (std::size_t z = 0; z < p.size() && remaining > 0; ++z) {
    if (p[z] <= 0.0) continue;
    const double frac = p[z] / mass_left;
    std::uint64_t k = remaining;
    if (frac < 1.0) {
      std::binomial_distribution<std::uint64_t> draw(remaining, frac);
      k = draw(rng);
    }
    out.counts[z] = k;
    remaining -= k;
    mass_left -= p[z];
    if (mass_left <= 0.0) break;
  }
  if (remaining > 0) {
    // Round-off left mass unassigned; give it to the last outcome with support.
    for (std::size_t z = p.size(); z-- > 0;) {
      if (p[z] > 0.0) {
        out.counts[z] += remaining;
        break;
      }
    }
  }
  return out;
}

ShotCounts sample(const QuantumState& s, std::uint64_t shots, const std::vector<ReadoutError>* readout,
                  std::uint64_t seed) {
  const auto p = s.probabilities();
  return sample_distribution(p, s.n_qubits(), shots, readout, seed);
}

double expectation_from_counts(const ShotCounts& counts, std::span<const double> costs) {
  require(costs.size() == counts.counts.size(), "cost table does not match outcome length");
  require(counts.shots > 0, "empty shot histogram");
  double sum = 0.0;
  for (std::size_t z = 0; z < costs.size(); ++z) {
    if (counts.counts[z]) sum += static_cast<double>(counts.counts[z]) * costs[z];
  }
  return sum / static_cast<double>(counts.shots);
}

double expectation_from_counts(const ShotCounts& counts, const Graph& g, const PenaltyWeights& w) {
  require(counts.n_qubits == g.n_vertices(), "outcome length " + std::to_string(counts.n_qubits) +
                                                 " does not match " + std::to_string(g.n_vertices()) + " vertices");
  std::vector<double> costs(counts.counts.size());
  for (std::size_t z = 0; z < costs.size(); ++z) costs[z] = classical_cost(g, w, static_cast<BitString>(z), g.n_vertices());
  return expectation_from_counts(counts, costs);
}

double success_probability(const QuantumState& s, std::span<const BitString> targets) {
  const auto p = s.probabilities();
  double mass = 0.0;
  for (BitString z : targets) mass += p.at(z);
  return mass;
}

double success_probability(const ShotCounts& counts, std::span<const BitString> targets) {
  std::uint64_t hits = 0;
  for (BitString z : targets) hits += counts.counts.at(z);
  return static_cast<double>(hits) / static_cast<double>(counts.shots);
}

}  // namespace qaoa
