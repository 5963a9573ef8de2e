#include "qbudget/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qbudget {

std::string format_fraction(std::size_t k, std::size_t n) {
  char buf[96];
  const double pct = n ? 100.0 * static_cast<double>(k) / static_cast<double>(n) : 0.0;
  std::snprintf(buf, sizeof buf, "%zu/%zu (%.2f%%)", k, n, pct);
  return buf;
}

SweepReport summarize(const std::vector<ParsedRow>& rows) {
  SweepReport rep;
  std::vector<std::vector<double>> fids;
  for (const auto& pr : rows) {
    const SweepRow& r = pr.row;
    auto it = std::find_if(rep.models.begin(), rep.models.end(),
                           [&](const ModelSummary& m) { return m.model == r.model; });
    if (it == rep.models.end()) {
      rep.models.push_back({});
      rep.models.back().model = r.model;
      fids.emplace_back();
      it = rep.models.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - rep.models.begin());
    ModelSummary& m = *it;
    ++m.rows;
    fids[idx].push_back(r.avg_state_fidelity);
    if (!r.within_bound) {
      ++m.violations;
      m.violation_lines.push_back(pr.line);
    }
    if (r.avg_state_fidelity < r.s_total) ++m.fidelity_violations;
    if (evaluate_bound(r).second != r.within_bound) ++m.inconsistent;
    if (r.within_bound_mitigated) {
      m.mitigated_violations = m.mitigated_violations.value_or(0) + (*r.within_bound_mitigated ? 0 : 1);
    }
  }
  for (std::size_t i = 0; i < rep.models.size(); ++i) {
    auto& f = fids[i];
    std::sort(f.begin(), f.end());
    auto& m = rep.models[i];
    m.min_fidelity = f.front();
    m.max_fidelity = f.back();
    const std::size_t n = f.size();
    m.median_fidelity = n % 2 ? f[n / 2] : 0.5 * (f[n / 2 - 1] + f[n / 2]);
  }
  return rep;
}

SweepReport report_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw ValidationError("CSV has a header but no rows");
  return summarize(rows);
}

std::string SweepReport::to_text() const {
  std::ostringstream out;
  char buf[160];
  for (const auto& m : models) {
    out << "model " << m.model << ": " << m.rows << " rows\n";
    out << "  bound violations:    " << format_fraction(m.violations, m.rows) << '\n';
    out << "  fidelity < S_T:      " << format_fraction(m.fidelity_violations, m.rows) << '\n';
    if (m.mitigated_violations) {
      out << "  mitigated violations: " << format_fraction(*m.mitigated_violations, m.rows) << '\n';
    }
    std::snprintf(buf, sizeof buf, "  avg_state_fidelity:  min %.6f  median %.6f  max %.6f\n",
                  m.min_fidelity, m.median_fidelity, m.max_fidelity);
    out << buf;
    if (m.inconsistent) out << "  WARNING: " << m.inconsistent << " rows disagree with their recomputed bound\n";
    if (!m.violation_lines.empty()) {
      out << "  violations at lines:";
      for (int l : m.violation_lines) out << ' ' << l;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace qbudget
