#pragma once

#include <map>
#include <string>
#include <vector>

#include "qbudget/calibration.hpp"
#include "qbudget/circuit.hpp"
#include "qbudget/lowering.hpp"

namespace qbudget {

/// Error probability and duration charged to one circuit operation.
struct GateCost {
  double error = 0.0;
  double duration_ns = 0.0;
};

/// Cost of a lowered operation on physical qubits. unitary2q is charged
/// 3x the pair's cx error (capped at 1) and 3x cx duration plus six median
/// single-qubit durations. Throws ValidationError if no entry exists.
GateCost gate_cost(const Operation& op, const BackendCalibration& cal);

struct TimingReport {
  /// Active time per touched physical qubit, from circuit start to the start
  /// of its measurement (or the end of its last gate), in ns.
  std::map<int, double> qubit_time_ns;
  /// Start time of every operation, aligned with circuit.ops().
  std::vector<double> start_ns;
};

/// Per-qubit clocks: a single-qubit gate advances its clock; a two-qubit gate
/// starts at max(t_a, t_b); a barrier aligns its qubits to their max;
/// measurement stops the clock.
TimingReport schedule_times(const Circuit& circuit, const BackendCalibration& cal);

enum class FactorKind { Gate, Measurement, DecoherenceT1, DecoherenceT2 };
std::string_view factor_kind_name(FactorKind k);

struct SuccessFactor {
  std::string label;
  FactorKind kind;
  double probability;
};

struct ErrorBudget {
  std::vector<SuccessFactor> factors;
  double success = 1.0;  // S_T
  double error = 0.0;    // P_T = 1 - S_T
  TimingReport timing;

  /// Itemized table with a running product column.
  std::string to_text() const;
  std::string to_json() const;
};

/// S_T as the product of (1 - P_i) over every gate instance, every measured
/// qubit's readout (when `include_measurement`), and exp(-t_j/T1_j),
/// exp(-t_j/T2_j) for every touched qubit.
ErrorBudget success_probability(const Circuit& circuit, const BackendCalibration& cal,
                                bool include_measurement = true);

struct RankedLayout {
  Layout layout;
  ErrorBudget budget;
};

/// All injective placements whose two-qubit interactions land on coupling
/// edges (for a path-shaped interaction graph these are the simple paths of the
/// coupling graph, both orientations).
std::vector<Layout> candidate_layouts(const Circuit& logical, const CouplingMap& coupling);

/// Scores every candidate placement of the (already lowered) logical circuit
/// and returns the best `top_k` by ascending P_T; ties break on the
/// lexicographic physical index tuple. top_k <= 0 returns all.
std::vector<RankedLayout> best_chains(const BackendCalibration& cal, const Circuit& logical,
                                      int top_k, bool include_measurement = true);

}  // namespace qbudget
