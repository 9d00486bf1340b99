#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace qaoa {

/// Per-qubit measurement confusion. p01 = P(read 1 | 0), p10 = P(read 0 | 1).
struct ReadoutError {
  double p01 = 0.0;
  double p10 = 0.0;

  /// [[P(0|0), P(1|0)], [P(0|1), P(1|1)]], row-major.
  std::array<double, 4> confusion() const { return {1.0 - p01, p01, p10, 1.0 - p10}; }
};

/// Gate-level noise: depolarizing after every gate, thermal relaxation over the gate duration,
/// and readout confusion at measurement. Per-qubit arrays of length 1 apply to every qubit.
/// Infinite t1/t2 disables relaxation.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  std::vector<double> t1_us{kInfinity};
  std::vector<double> t2_us{kInfinity};
  double dur_1q_ns = 0.0;
  double dur_2q_ns = 0.0;
  std::vector<ReadoutError> readout{ReadoutError{}};

  static constexpr double kInfinity = __builtin_huge_val();

  /// Every channel is the identity.
  static NoiseModel ideal() { return {}; }
  /// The in-repo default calibration (representative of a small superconducting device).
  static NoiseModel device_default();

  double t1(int qubit) const { return pick(t1_us, qubit); }
  double t2(int qubit) const { return pick(t2_us, qubit); }
  const ReadoutError& readout_for(int qubit) const {
    return readout.size() == 1 ? readout[0] : readout.at(static_cast<std::size_t>(qubit));
  }
  bool has_readout_error() const;

  /// Throws ContractViolation naming the offending field.
  void validate() const;
  /// Additionally checks per-qubit arrays have length 1 or n_qubits.
  void validate_for(int n_qubits) const;

 private:
  static double pick(const std::vector<double>& v, int qubit) {
    return v.size() == 1 ? v[0] : v.at(static_cast<std::size_t>(qubit));
  }
};

/// Calibration file: a JSON object with exactly the keys p1, p2, t1_us, t2_us, dur_1q_ns,
/// dur_2q_ns, readout_p01, readout_p10. The four per-qubit keys accept a number or an array;
/// t1_us/t2_us also accept the string "inf". Errors name the field.
NoiseModel parse_calibration(const std::string& text);
NoiseModel load_calibration(const std::filesystem::path& path);
std::string calibration_to_json(const NoiseModel& noise);

}  // namespace qaoa
