#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qbudget/calibration.hpp"
#include "qbudget/circuit.hpp"
#include "qbudget/statevector.hpp"

namespace qbudget {

/// Bitstring -> occurrences. Leftmost character is the highest clbit index.
using Counts = std::map<std::string, std::uint64_t>;
/// Bitstring -> probability, same key convention as Counts.
using Distribution = std::map<std::string, double>;

/// `width` low bits of `value`, most significant first.
std::string bitstring(std::uint64_t value, int width);

struct IdealResult {
  StateVector state;
  /// Born-rule distribution over the classical register; empty when the
  /// circuit measures nothing.
  Distribution distribution;
};

/// Exact simulation over all circuit qubits (at most kMaxSimQubits).
IdealResult simulate_ideal(const Circuit& circuit);

/// Circuit restricted to the qubits it touches, renumbered 0..k-1 in
/// ascending physical order. `physical[i]` is the original index of qubit i.
struct CompactCircuit {
  Circuit circuit;
  std::vector<int> physical;
  /// Index into the original ops() of each compact operation.
  std::vector<std::size_t> source;
};
CompactCircuit compact_active(const Circuit& circuit);

struct RunResult {
  Counts counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double avg_state_fidelity = 0.0;
  double clean_fraction = 0.0;

  std::string to_json() const;
  static RunResult from_json(std::string_view text);
  bool operator==(const RunResult&) const = default;
};

/// Monte-Carlo trajectories of a lowered, laid-out circuit under `cal`.
///
/// Each gate injects a uniformly random non-identity Pauli on its support with
/// the calibrated error probability. Every idle or busy interval d on a qubit
/// triggers a relaxation event with probability 1 - exp(-d/T1) (a decay jump
/// |0><1| with the current |1> population as its conditional probability,
/// otherwise a projection onto |0>) and a dephasing event with probability
/// 1 - exp(-d/T2) (Z with probability 1/2). Readout flips each bit with p10 or
/// p01. A shot is clean when none of these events fired, so the expected clean
/// fraction equals the estimator's S_T.
///
/// Shots run in parallel in fixed blocks of 256; each block's generator
/// derives from (seed, block), so the result is identical to
/// simulate_noisy_serial.
RunResult simulate_noisy(const Circuit& circuit, const BackendCalibration& cal,
                         std::uint64_t shots, std::uint64_t seed);

/// Single-threaded reference for simulate_noisy.
RunResult simulate_noisy_serial(const Circuit& circuit, const BackendCalibration& cal,
                                std::uint64_t shots, std::uint64_t seed);

}  // namespace qbudget
