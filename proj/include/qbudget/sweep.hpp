#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbudget/calibration.hpp"
#include "qbudget/lowering.hpp"
#include "qbudget/noisy_sim.hpp"

namespace qbudget {

enum class ModelId { Ising, Qpe, Grover2, Grover3 };
std::string_view model_name(ModelId id);
ModelId parse_model(std::string_view s);

struct ModelOptions {
  double lambda = 2.5;
  int qpe_t = 3;
  int grover_target = 3;
};

/// A reference circuit ready for placement: lowered, measured, with its ideal
/// outcome distribution and the noiseless value of its observable.
struct ModelInstance {
  ModelId id;
  Circuit logical;
  Distribution ideal;
  /// "magnetization_ratio", "phase" or "none".
  std::string observable;
  double observable_sim = 0.0;
  /// Ising sites or QPE counting qubits; 0 otherwise.
  int register_size = 0;
};
ModelInstance make_model(ModelId id, const ModelOptions& opts = {});

/// Observable of a measured distribution (NaN for "none").
double model_observable(const ModelInstance& m, const Distribution& dist);

enum class NoiseMode { Full, ReadoutOnly, None };
std::string_view noise_mode_name(NoiseMode m);
NoiseMode parse_noise_mode(std::string_view s);
BackendCalibration apply_noise_mode(const BackendCalibration& cal, NoiseMode mode);

struct SweepConfig {
  ModelId model = ModelId::Ising;
  ModelOptions options;
  int backends = 25;
  int layouts_per_backend = 8;
  std::uint64_t shots = 20000;
  std::uint64_t seed = 1;
  /// Defaults to ring-8 for path-shaped models, full-6 otherwise.
  std::optional<Topology> topology;
  int backend_qubits = 0;
  NoiseMode noise = NoiseMode::Full;
  bool mitigate = false;
};

/// Topology and size used when the config leaves them unset.
Topology default_topology(ModelId id);
int default_backend_qubits(ModelId id);

struct SweepRow {
  std::string model;
  std::string backend;
  std::vector<int> layout;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double p_total = 0.0;
  double s_total = 1.0;
  double avg_state_fidelity = 0.0;
  double classical_fidelity = 0.0;
  std::string observable;
  double observable_sim = 0.0;
  double observable_phys = 0.0;
  double bound_value = 0.0;
  bool within_bound = false;

  // Mitigation columns, present only in mitigate-sweep output.
  std::optional<double> s_total_no_meas;
  std::optional<double> classical_fidelity_mitigated;
  std::optional<bool> within_bound_mitigated;

  /// Not written to CSV.
  double clean_fraction = 0.0;
};

/// Bound rule for a row: observable rule for ising and qpe rows, fidelity rule
/// otherwise. Returns (bound_value, within_bound) from the row's own columns.
std::pair<double, bool> evaluate_bound(const SweepRow& row);

/// Picks `count` entries evenly spaced over a ranked list of `total`.
std::vector<std::size_t> spread_indices(std::size_t total, std::size_t count);

/// Rows in (backend, layout rank) order. Deterministic under config.seed.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

extern const std::vector<std::string> kSweepColumns;
extern const std::vector<std::string> kMitigationColumns;

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string to_csv(const std::vector<SweepRow>& rows);

struct ParsedRow {
  int line = 0;
  SweepRow row;
};
/// Throws ValidationError naming the line of the first malformed row.
std::vector<ParsedRow> parse_csv(std::string_view text);

}  // namespace qbudget
