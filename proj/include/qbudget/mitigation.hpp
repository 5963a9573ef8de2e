#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "qbudget/calibration.hpp"
#include "qbudget/noisy_sim.hpp"

namespace qbudget {

inline constexpr int kMaxMitigationQubits = 12;

/// M(i, j) = P(report bitstring i | prepared basis state j). Bit c of an index
/// is clbit c.
struct MitigationMatrix {
  int n = 0;
  std::string mode;  // "exact" or "sampled"
  Eigen::MatrixXd m;

  std::string to_json() const;
  static MitigationMatrix from_json(std::string_view text);
};

/// Physical qubit measured into each clbit of `circuit`, in clbit order.
/// Every clbit must be written exactly once.
Layout readout_layout(const Circuit& circuit);

/// Tensor product of the per-qubit flip matrices [[1-p10, p01], [p10, 1-p01]]
/// for the physical qubits `layout.physical[c]` read into clbit c.
MitigationMatrix exact_mitigation_matrix(const BackendCalibration& cal, const Layout& layout);

/// Runs the 2^n preparation circuits (x on every set bit, then measure)
/// through the trajectory simulator with gate errors and decoherence switched
/// off and estimates each column from `shots` samples.
MitigationMatrix sampled_mitigation_matrix(const BackendCalibration& cal, const Layout& layout,
                                           std::uint64_t shots, std::uint64_t seed);

/// Number of preparation circuits sampled mode runs for n qubits.
inline std::uint64_t mitigation_jobs(int n) { return std::uint64_t{1} << n; }

struct MitigatedVector {
  Eigen::VectorXd values;
  /// ||M c - raw||_2 divided by sum(raw).
  double residual = 0.0;
  int iterations = 0;
  /// 1 / (reciprocal condition estimate of M).
  double condition = 0.0;
};

/// argmin ||M c - raw||_2 over c >= 0 with sum c = sum raw. Starts from the
/// clipped and renormalized linear solve, then runs projected gradient until
/// the step falls below 1e-10 (relative to sum(raw)) or 10000 iterations.
MitigatedVector mitigate(const MitigationMatrix& mm, const Eigen::VectorXd& raw);

struct MitigatedCounts {
  /// Non-negative, sums to the raw shot count.
  std::map<std::string, double> counts;
  /// ||M c - raw||_2 divided by the shot count.
  double residual = 0.0;
  int iterations = 0;
  /// 1 / (reciprocal condition estimate of M).
  double condition = 0.0;
};

/// mitigate() over a count table; zero entries are dropped from the result.
MitigatedCounts mitigate_counts(const MitigationMatrix& mm, const Counts& raw);

/// Raw counts as a dense vector indexed by the bitstring's integer value.
Eigen::VectorXd counts_vector(const Counts& counts, int n);

/// Normalized distribution of mitigated counts (zero entries dropped).
Distribution to_distribution(const MitigatedCounts& mc);

}  // namespace qbudget
