#include "qbudget/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qbudget {

GateCost gate_cost(const Operation& op, const BackendCalibration& cal) {
  switch (op.kind) {
    case GateKind::Barrier:
      return {};
    case GateKind::Measure:
      return {cal.qubits.at(op.qubits[0]).readout_error, cal.measure_duration_ns};
    case GateKind::Unitary2Q: {
      const auto* cx = cal.find_gate("cx", op.qubits);
      if (!cx) {
        throw ValidationError("no cx calibration on (" + std::to_string(op.qubits[0]) + "," +
                              std::to_string(op.qubits[1]) + ") to charge '" + describe(op) + "'");
      }
      return {std::min(1.0, 3.0 * cx->error),
              3.0 * cx->duration_ns + 6.0 * cal.median_1q_duration_ns()};
    }
    default: {
      const auto* g = cal.find_gate(gate_name(op.kind), op.qubits);
      if (!g) throw ValidationError("missing calibration entry for '" + describe(op) + "'");
      return {g->error, g->duration_ns};
    }
  }
}

TimingReport schedule_times(const Circuit& circuit, const BackendCalibration& cal) {
  if (circuit.num_qubits() > cal.num_qubits) {
    throw ValidationError("circuit uses " + std::to_string(circuit.num_qubits()) +
                          " qubits, backend has " + std::to_string(cal.num_qubits));
  }
  TimingReport rep;
  std::vector<double> clock(circuit.num_qubits(), 0.0);
  std::vector<bool> touched(circuit.num_qubits(), false);
  rep.start_ns.reserve(circuit.ops().size());
  for (const auto& op : circuit.ops()) {
    if (op.kind == GateKind::Measure) {
      const int q = op.qubits[0];
      touched[q] = true;
      rep.start_ns.push_back(clock[q]);
      continue;
    }
    double start = 0.0;
    for (int q : op.qubits) start = std::max(start, clock[q]);
    rep.start_ns.push_back(start);
    if (op.kind == GateKind::Barrier) {
      for (int q : op.qubits) clock[q] = start;
      continue;
    }
    const double d = gate_cost(op, cal).duration_ns;
    for (int q : op.qubits) {
      clock[q] = start + d;
      touched[q] = true;
    }
  }
  for (int q = 0; q < circuit.num_qubits(); ++q) {
    if (touched[q]) rep.qubit_time_ns[q] = clock[q];
  }
  return rep;
}

std::string_view factor_kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::Gate:
      return "gate";
    case FactorKind::Measurement:
      return "measurement";
    case FactorKind::DecoherenceT1:
      return "decoherence_t1";
    case FactorKind::DecoherenceT2:
      return "decoherence_t2";
  }
  return "?";
}

ErrorBudget success_probability(const Circuit& circuit, const BackendCalibration& cal,
                                bool include_measurement) {
  ErrorBudget b;
  b.timing = schedule_times(circuit, cal);
  auto add = [&](std::string label, FactorKind kind, double p) {
    b.factors.push_back({std::move(label), kind, p});
  };
  for (const auto& op : circuit.ops()) {
    if (op.kind == GateKind::Barrier) continue;
    if (op.kind == GateKind::Measure) {
      if (include_measurement) {
        add(describe(op), FactorKind::Measurement, 1.0 - cal.qubits.at(op.qubits[0]).readout_error);
      }
      continue;
    }
    add(describe(op), FactorKind::Gate, 1.0 - gate_cost(op, cal).error);
  }
  for (const auto& [q, t] : b.timing.qubit_time_ns) {
    const auto& qc = cal.qubits.at(q);
    // t in ns, T in us.
    const std::string tag = " q[" + std::to_string(q) + "]";
    add("T1" + tag, FactorKind::DecoherenceT1, std::exp(-t / (qc.t1_us * 1e3)));
    add("T2" + tag, FactorKind::DecoherenceT2, std::exp(-t / (qc.t2_us * 1e3)));
  }
  // Sorted so that layouts with the same factors get bit-identical totals.
  std::vector<double> ps;
  for (const auto& f : b.factors) ps.push_back(f.probability);
  std::sort(ps.begin(), ps.end());
  for (double p : ps) b.success *= p;
  b.error = 1.0 - b.success;
  return b;
}

std::string ErrorBudget::to_text() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-36s %-15s %-20s %s\n", "source", "kind", "factor",
                "cumulative");
  out << line;
  double running = 1.0;
  for (const auto& f : factors) {
    running *= f.probability;
    std::snprintf(line, sizeof line, "%-36s %-15s %-20.15g %.15g\n", f.label.c_str(),
                  std::string(factor_kind_name(f.kind)).c_str(), f.probability, running);
    out << line;
  }
  std::snprintf(line, sizeof line, "S_T = %.15g\nP_T = %.15g\n", success, error);
  out << line;
  return out.str();
}

std::string ErrorBudget::to_json() const {
  nlohmann::json j;
  j["factors"] = nlohmann::json::array();
  double running = 1.0;
  for (const auto& f : factors) {
    running *= f.probability;
    j["factors"].push_back({{"label", f.label},
                            {"kind", factor_kind_name(f.kind)},
                            {"factor", f.probability},
                            {"cumulative", running}});
  }
  j["s_total"] = success;
  j["p_total"] = error;
  nlohmann::json times = nlohmann::json::object();
  for (const auto& [q, t] : timing.qubit_time_ns) times[std::to_string(q)] = t;
  j["qubit_time_ns"] = times;
  return j.dump(2) + "\n";
}

namespace {

void extend(const std::vector<std::vector<int>>& adj, const CouplingMap& coupling,
            std::vector<int>& assign, std::vector<bool>& used, int next,
            std::vector<Layout>& out) {
  const int n = static_cast<int>(assign.size());
  if (next == n) {
    out.push_back({assign});
    return;
  }
  for (int p = 0; p < coupling.num_qubits; ++p) {
    if (used[p]) continue;
    bool ok = true;
    for (int nb : adj[next]) {
      if (nb < next && !coupling.coupled(assign[nb], p)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    used[p] = true;
    assign[next] = p;
    extend(adj, coupling, assign, used, next + 1, out);
    used[p] = false;
  }
}

}  // namespace

std::vector<Layout> candidate_layouts(const Circuit& logical, const CouplingMap& coupling) {
  const int n = logical.num_qubits();
  std::vector<std::set<int>> nbrs(n);
  for (const auto& op : logical.ops()) {
    if (op.kind == GateKind::Barrier || op.qubits.size() < 2) continue;
    for (int a : op.qubits) {
      for (int b : op.qubits) {
        if (a != b) nbrs[a].insert(b);
      }
    }
  }
  std::vector<std::vector<int>> adj(n);
  for (int q = 0; q < n; ++q) adj[q].assign(nbrs[q].begin(), nbrs[q].end());
  std::vector<Layout> out;
  if (n > coupling.num_qubits) return out;
  std::vector<int> assign(n, -1);
  std::vector<bool> used(coupling.num_qubits, false);
  extend(adj, coupling, assign, used, 0, out);
  return out;
}

std::vector<RankedLayout> best_chains(const BackendCalibration& cal, const Circuit& logical,
                                      int top_k, bool include_measurement) {
  const auto coupling = cal.coupling_map();
  const auto layouts = candidate_layouts(logical, coupling);
  if (layouts.empty()) {
    throw ValidationError("no placement of the " + std::to_string(logical.num_qubits()) +
                          "-qubit circuit fits the coupling graph of " + cal.name);
  }
  std::vector<RankedLayout> ranked(layouts.size());
  std::vector<std::string> failures(layouts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < layouts.size(); ++i) {
    try {
      const Circuit physical = apply_layout(logical, layouts[i], coupling);
      ranked[i] = {layouts[i], success_probability(physical, cal, include_measurement)};
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw ValidationError(f);
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedLayout& a, const RankedLayout& b) {
    if (a.budget.error != b.budget.error) return a.budget.error < b.budget.error;
    return a.layout.physical < b.layout.physical;
  });
  if (top_k > 0 && static_cast<std::size_t>(top_k) < ranked.size()) ranked.resize(top_k);
  return ranked;
}

}  // namespace qbudget
