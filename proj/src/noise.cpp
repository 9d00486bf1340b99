#include "qaoa/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "qaoa/error.hpp"

namespace qaoa {

using nlohmann::json;

NoiseModel NoiseModel::device_default() {
  NoiseModel m;
  m.p1 = 5e-4;
  m.p2 = 1e-2;
  m.t1_us = {100.0};
  m.t2_us = {100.0};
  m.dur_1q_ns = 35.0;
  m.dur_2q_ns = 300.0;
  m.readout = {ReadoutError{2.5e-2, 2.5e-2}};
  return m;
}

bool NoiseModel::has_readout_error() const {
  for (const auto& r : readout) {
    if (r.p01 != 0.0 || r.p10 != 0.0) return true;
  }
  return false;
}

namespace {

void check_probability(double v, const std::string& field) {
  require(std::isfinite(v) && v >= 0.0 && v <= 1.0, "field '" + field + "': probability " + std::to_string(v) + " outside [0, 1]");
}

}  // namespace

void NoiseModel::validate() const {
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  require(!t1_us.empty() && !t2_us.empty() && !readout.empty(), "per-qubit arrays must be nonempty");
  for (double t : t1_us) require(t > 0.0 && !std::isnan(t), "field 't1_us': relaxation time must be > 0");
  for (double t : t2_us) require(t > 0.0 && !std::isnan(t), "field 't2_us': dephasing time must be > 0");
  require(std::isfinite(dur_1q_ns) && dur_1q_ns >= 0.0, "field 'dur_1q_ns': duration must be >= 0");
  require(std::isfinite(dur_2q_ns) && dur_2q_ns >= 0.0, "field 'dur_2q_ns': duration must be >= 0");
  const std::size_t n = std::max(t1_us.size(), t2_us.size());
  const auto at = [](const std::vector<double>& v, std::size_t q) { return v[std::min(q, v.size() - 1)]; };
  for (std::size_t q = 0; q < n; ++q) {
    const double t1q = at(t1_us, q), t2q = at(t2_us, q);
    require(std::isinf(t1q) || t2q <= 2.0 * t1q,
            "field 't2_us': t2 must satisfy t2 <= 2*t1 (qubit " + std::to_string(q) + ")");
  }
  for (const auto& r : readout) {
    check_probability(r.p01, "readout_p01");
    check_probability(r.p10, "readout_p10");
  }
}

void NoiseModel::validate_for(int n_qubits) const {
  validate();
  const auto ok = [n_qubits](std::size_t size) { return size == 1 || size == static_cast<std::size_t>(n_qubits); };
  require(ok(t1_us.size()), "field 't1_us': expected 1 or " + std::to_string(n_qubits) + " entries");
  require(ok(t2_us.size()), "field 't2_us': expected 1 or " + std::to_string(n_qubits) + " entries");
  require(ok(readout.size()), "readout arrays: expected 1 or " + std::to_string(n_qubits) + " entries");
}

namespace {

double number_field(const json& j, const std::string& field, bool allow_inf) {
  if (j.is_number()) return j.get<double>();
  if (allow_inf && j.is_string() && j.get<std::string>() == "inf") return NoiseModel::kInfinity;
  throw ParseError(0, "field '" + field + "': expected a number" + (allow_inf ? " or \"inf\"" : ""));
}

std::vector<double> array_field(const json& j, const std::string& field, bool allow_inf) {
  std::vector<double> out;
  if (j.is_array()) {
    if (j.empty()) throw ParseError(0, "field '" + field + "': array must be nonempty");
    for (const auto& e : j) out.push_back(number_field(e, field, allow_inf));
  } else {
    out.push_back(number_field(j, field, allow_inf));
  }
  return out;
}

json time_to_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double t : v) arr.push_back(std::isinf(t) ? json("inf") : json(t));
  return v.size() == 1 ? arr[0] : arr;
}

}  // namespace

NoiseModel parse_calibration(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("calibration is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "calibration must be a JSON object");
  static const std::set<std::string> keys{"p1", "p2", "t1_us", "t2_us", "dur_1q_ns", "dur_2q_ns", "readout_p01", "readout_p10"};
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw ParseError(0, "unknown calibration field '" + key + "'");
  }
  for (const auto& key : keys) {
    if (!j.contains(key)) throw ParseError(0, "missing calibration field '" + key + "'");
  }
  NoiseModel m;
  m.p1 = number_field(j["p1"], "p1", false);
  m.p2 = number_field(j["p2"], "p2", false);
  m.t1_us = array_field(j["t1_us"], "t1_us", true);
  m.t2_us = array_field(j["t2_us"], "t2_us", true);
  m.dur_1q_ns = number_field(j["dur_1q_ns"], "dur_1q_ns", false);
  m.dur_2q_ns = number_field(j["dur_2q_ns"], "dur_2q_ns", false);
  const auto p01 = array_field(j["readout_p01"], "readout_p01", false);
  const auto p10 = array_field(j["readout_p10"], "readout_p10", false);
  if (p01.size() != p10.size() && p01.size() != 1 && p10.size() != 1) {
    throw ParseError(0, "fields 'readout_p01' and 'readout_p10' have incompatible lengths");
  }
  const std::size_t nr = std::max(p01.size(), p10.size());
  m.readout.clear();
  for (std::size_t q = 0; q < nr; ++q) {
    m.readout.push_back({p01[p01.size() == 1 ? 0 : q], p10[p10.size() == 1 ? 0 : q]});
  }
  try {
    m.validate();
  } catch (const ContractViolation& e) {
    throw ParseError(0, e.what());
  }
  return m;
}

NoiseModel load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open calibration file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_calibration(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(0, e.detail(), path.string());
  }
}

std::string calibration_to_json(const NoiseModel& noise) {
  json j;
  j["p1"] = noise.p1;
  j["p2"] = noise.p2;
  j["t1_us"] = time_to_json(noise.t1_us);
  j["t2_us"] = time_to_json(noise.t2_us);
  j["dur_1q_ns"] = noise.dur_1q_ns;
  j["dur_2q_ns"] = noise.dur_2q_ns;
  json p01 = json::array(), p10 = json::array();
  for (const auto& r : noise.readout) {
    p01.push_back(r.p01);
    p10.push_back(r.p10);
  }
  j["readout_p01"] = noise.readout.size() == 1 ? p01[0] : p01;
  j["readout_p10"] = noise.readout.size() == 1 ? p10[0] : p10;
  return j.dump(2) + "\n";
}

}  // namespace qaoa
