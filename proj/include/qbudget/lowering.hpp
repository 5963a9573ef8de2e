#pragma once

#include <utility>
#include <vector>

#include "qbudget/circuit.hpp"

namespace qbudget {

/// Rewrites every gate into the hardware basis {rz, sx, x, cx}. unitary2q,
/// measure and barrier pass through; id is dropped. The result equals the
/// input up to a global phase.
Circuit lower_to_basis(const Circuit& circuit);

/// True iff the circuit only contains basis gates, unitary2q, measure, barrier.
bool is_lowered(const Circuit& circuit);

/// Injective logical -> physical qubit assignment.
struct Layout {
  std::vector<int> physical;

  static Layout identity(int n);
  bool operator==(const Layout&) const = default;
  auto operator<=>(const Layout&) const = default;
};

/// Physical qubit count plus undirected coupling edges.
struct CouplingMap {
  int num_qubits = 0;
  std::vector<std::pair<int, int>> edges;

  bool coupled(int a, int b) const;
};

/// Remaps the circuit onto physical qubits. Every multi-qubit gate must act on
/// coupled pairs; routing is not attempted.
Circuit apply_layout(const Circuit& circuit, const Layout& layout, const CouplingMap& coupling);

}  // namespace qbudget
