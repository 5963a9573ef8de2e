#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbudget/sweep.hpp"

namespace qbudget {

/// "2/276 (0.72%)".
std::string format_fraction(std::size_t k, std::size_t n);

struct ModelSummary {
  std::string model;
  std::size_t rows = 0;
  /// Rows whose within_bound flag is false.
  std::size_t violations = 0;
  /// Rows with avg_state_fidelity < s_total, whatever the model's bound rule.
  std::size_t fidelity_violations = 0;
  /// Rows whose stored flag disagrees with the bound recomputed from the row.
  std::size_t inconsistent = 0;
  std::optional<std::size_t> mitigated_violations;
  double min_fidelity = 0.0;
  double median_fidelity = 0.0;
  double max_fidelity = 0.0;
  std::vector<int> violation_lines;
};

struct SweepReport {
  std::vector<ModelSummary> models;  // in order of first appearance
  std::string to_text() const;
};

SweepReport summarize(const std::vector<ParsedRow>& rows);
/// Parses and summarizes; throws ValidationError on empty or malformed CSV.
SweepReport report_csv(std::string_view text);

}  // namespace qbudget
