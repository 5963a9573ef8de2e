#include "qbudget/lowering.hpp"

#include <numbers>
#include <set>

namespace qbudget {

namespace {

using std::numbers::pi;

class Lowerer {
 public:
  explicit Lowerer(const Circuit& src) : out_(src.num_qubits(), src.num_clbits()) {}

  Circuit take() { return std::move(out_); }

  void h(int q) {
    out_.rz(pi / 2, q);
    out_.sx(q);
    out_.rz(pi / 2, q);
  }

  // ry(theta) = rz(pi) . sx . rz(theta + pi) . sx up to phase (matrix order).
  void ry(double theta, int q) {
    out_.sx(q);
    out_.rz(theta + pi, q);
    out_.sx(q);
    out_.rz(pi, q);
  }

  void cp(double theta, int c, int t) {
    out_.rz(theta / 2, c);
    out_.cx(c, t);
    out_.rz(-theta / 2, t);
    out_.cx(c, t);
    out_.rz(theta / 2, t);
  }

  // Standard six-cx CCZ.
  void ccz(int a, int b, int c) {
    out_.cx(b, c);
    out_.rz(-pi / 4, c);
    out_.cx(a, c);
    out_.rz(pi / 4, c);
    out_.cx(b, c);
    out_.rz(-pi / 4, c);
    out_.cx(a, c);
    out_.rz(pi / 4, b);
    out_.rz(pi / 4, c);
    out_.cx(a, b);
    out_.rz(pi / 4, a);
    out_.rz(-pi / 4, b);
    out_.cx(a, b);
  }

  void lower(const Operation& op) {
    const auto& q = op.qubits;
    switch (op.kind) {
      case GateKind::Id:
        break;
      case GateKind::X:
      case GateKind::SX:
      case GateKind::RZ:
      case GateKind::CX:
      case GateKind::Unitary2Q:
      case GateKind::Measure:
      case GateKind::Barrier:
        out_.append(op);
        break;
      case GateKind::H:
        h(q[0]);
        break;
      case GateKind::Z:
        out_.rz(pi, q[0]);
        break;
      case GateKind::S:
        out_.rz(pi / 2, q[0]);
        break;
      case GateKind::Sdg:
        out_.rz(-pi / 2, q[0]);
        break;
      case GateKind::T:
        out_.rz(pi / 4, q[0]);
        break;
      case GateKind::Tdg:
        out_.rz(-pi / 4, q[0]);
        break;
      case GateKind::RY:
        ry(op.angle, q[0]);
        break;
      case GateKind::CZ:
        h(q[1]);
        out_.cx(q[0], q[1]);
        h(q[1]);
        break;
      case GateKind::Swap:
        out_.cx(q[0], q[1]);
        out_.cx(q[1], q[0]);
        out_.cx(q[0], q[1]);
        break;
      case GateKind::CP:
        cp(op.angle, q[0], q[1]);
        break;
      case GateKind::CCZ:
        ccz(q[0], q[1], q[2]);
        break;
      case GateKind::CCX:
        h(q[2]);
        ccz(q[0], q[1], q[2]);
        h(q[2]);
        break;
    }
  }

 private:
  Circuit out_;
};

}  // namespace

Circuit lower_to_basis(const Circuit& circuit) {
  Lowerer lw(circuit);
  for (const auto& op : circuit.ops()) lw.lower(op);
  return lw.take();
}

bool is_lowered(const Circuit& circuit) {
  for (const auto& op : circuit.ops()) {
    switch (op.kind) {
      case GateKind::X:
      case GateKind::SX:
      case GateKind::RZ:
      case GateKind::CX:
      case GateKind::Unitary2Q:
      case GateKind::Measure:
      case GateKind::Barrier:
        break;
      default:
        return false;
    }
  }
  return true;
}

Layout Layout::identity(int n) {
  Layout l;
  l.physical.resize(n);
  for (int i = 0; i < n; ++i) l.physical[i] = i;
  return l;
}

bool CouplingMap::coupled(int a, int b) const {
  for (const auto& [u, v] : edges) {
    if ((u == a && v == b) || (u == b && v == a)) return true;
  }
  return false;
}

Circuit apply_layout(const Circuit& circuit, const Layout& layout, const CouplingMap& coupling) {
  if (static_cast<int>(layout.physical.size()) != circuit.num_qubits()) {
    throw ValidationError("layout has " + std::to_string(layout.physical.size()) +
                          " entries for a circuit of " + std::to_string(circuit.num_qubits()) +
                          " qubits");
  }
  std::set<int> seen;
  for (int p : layout.physical) {
    if (p < 0 || p >= coupling.num_qubits) {
      throw ValidationError("layout references physical qubit " + std::to_string(p) +
                            " outside a backend of " + std::to_string(coupling.num_qubits));
    }
    if (!seen.insert(p).second) {
      throw ValidationError("layout is not injective (physical qubit " + std::to_string(p) +
                            " used twice)");
    }
  }
  Circuit out(coupling.num_qubits, circuit.num_clbits());
  for (const auto& op : circuit.ops()) {
    Operation mapped = op;
    for (auto& q : mapped.qubits) q = layout.physical[q];
    if (op.kind != GateKind::Barrier && mapped.qubits.size() > 1) {
      for (std::size_t i = 0; i < mapped.qubits.size(); ++i) {
        for (std::size_t j = i + 1; j < mapped.qubits.size(); ++j) {
          if (!coupling.coupled(mapped.qubits[i], mapped.qubits[j])) {
            throw ValidationError("gate '" + describe(op) + "' maps to uncoupled pair (" +
                                  std::to_string(mapped.qubits[i]) + "," +
                                  std::to_string(mapped.qubits[j]) + ")");
          }
        }
      }
    }
    out.append(std::move(mapped));
  }
  return out;
}

}  // namespace qbudget
