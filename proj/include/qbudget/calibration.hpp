#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbudget/lowering.hpp"

namespace qbudget {

/// Per-qubit coherence and readout figures. Times in microseconds; an infinite
/// time means the decay channel is switched off.
struct QubitCalibration {
  double t1_us = 0.0;
  double t2_us = 0.0;
  double readout_error = 0.0;
  /// P(report 0 | prepared 1); defaults to readout_error.
  std::optional<double> p01;
  /// P(report 1 | prepared 0); defaults to readout_error.
  std::optional<double> p10;

  double prob_meas0_prep1() const { return p01.value_or(readout_error); }
  double prob_meas1_prep0() const { return p10.value_or(readout_error); }

  bool operator==(const QubitCalibration&) const = default;
};

struct GateCalibration {
  std::string name;
  std::vector<int> qubits;
  double error = 0.0;
  double duration_ns = 0.0;

  bool operator==(const GateCalibration&) const = default;
};

using GateKey = std::pair<std::string, std::vector<int>>;

class BackendCalibration {
 public:
  std::string name;
  int num_qubits = 0;
  std::vector<std::pair<int, int>> coupling;
  std::vector<QubitCalibration> qubits;
  std::map<GateKey, GateCalibration> gates;
  double measure_duration_ns = 0.0;

  void add_gate(GateCalibration g);

  /// Exact lookup, falling back to the reversed tuple for two-qubit gates.
  const GateCalibration* find_gate(std::string_view gate, const std::vector<int>& qubits) const;

  bool coupled(int a, int b) const;
  CouplingMap coupling_map() const { return {num_qubits, coupling}; }

  /// Median duration of the non-virtual single-qubit gates (duration > 0).
  double median_1q_duration_ns() const;

  /// Throws ValidationError naming the offending qubit or gate.
  void validate() const;

  bool operator==(const BackendCalibration&) const = default;
};

struct LoadedCalibration {
  BackendCalibration calibration;
  std::vector<std::string> warnings;
};

/// Reads either the native schema or a vendor properties export
/// (`qubits[*]` as name/value/unit lists, `gates[*].parameters`).
LoadedCalibration load_calibration(std::string_view document);
LoadedCalibration load_calibration_file(const std::string& path);

/// Native-schema JSON text. Infinite coherence times are written as null.
std::string dump_calibration(const BackendCalibration& cal);

enum class Topology { Line, Ring, Full };
Topology parse_topology(std::string_view s);
std::string_view topology_name(Topology t);

/// Deterministic synthetic backend. Error magnitudes are sampled log-uniformly
/// (1q in [1e-4, 1e-3], cx in [1e-3, 1e-2], readout in [5e-3, 5e-2]); rz is a
/// virtual gate with zero error and duration.
BackendCalibration synth_calibration(std::uint64_t seed, int num_qubits, Topology topology);

/// Copies with selected noise sources switched off.
BackendCalibration without_gate_errors(BackendCalibration cal);
BackendCalibration without_decoherence(BackendCalibration cal);
BackendCalibration without_readout_errors(BackendCalibration cal);
inline BackendCalibration readout_only(BackendCalibration cal) {
  return without_decoherence(without_gate_errors(std::move(cal)));
}
inline BackendCalibration noiseless(BackendCalibration cal) {
  return without_readout_errors(readout_only(std::move(cal)));
}

}  // namespace qbudget
