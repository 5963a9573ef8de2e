#include "qbudget/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>

namespace qbudget {

namespace {

struct GateInfo {
  GateKind kind;
  std::string_view name;
  int arity;
  bool angle;
};

constexpr std::array<GateInfo, 20> kGates{{
    {GateKind::Id, "id", 1, false},
    {GateKind::X, "x", 1, false},
    {GateKind::SX, "sx", 1, false},
    {GateKind::RZ, "rz", 1, true},
    {GateKind::H, "h", 1, false},
    {GateKind::Z, "z", 1, false},
    {GateKind::S, "s", 1, false},
    {GateKind::Sdg, "sdg", 1, false},
    {GateKind::T, "t", 1, false},
    {GateKind::Tdg, "tdg", 1, false},
    {GateKind::RY, "ry", 1, true},
    {GateKind::CX, "cx", 2, false},
    {GateKind::CZ, "cz", 2, false},
    {GateKind::Swap, "swap", 2, false},
    {GateKind::CP, "cp", 2, true},
    {GateKind::CCX, "ccx", 3, false},
    {GateKind::CCZ, "ccz", 3, false},
    {GateKind::Unitary2Q, "unitary2q", 2, false},
    {GateKind::Measure, "measure", 1, false},
    {GateKind::Barrier, "barrier", 0, false},
}};

const GateInfo& info(GateKind kind) { return kGates[static_cast<std::size_t>(kind)]; }

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  for (const auto& g : kGates) {
    if (g.name == name) return g.kind;
  }
  return std::nullopt;
}

int gate_arity(GateKind kind) { return info(kind).arity; }
bool gate_has_angle(GateKind kind) { return info(kind).angle; }

bool is_two_qubit(GateKind kind) {
  return kind == GateKind::CX || kind == GateKind::CZ || kind == GateKind::Swap ||
         kind == GateKind::CP || kind == GateKind::Unitary2Q;
}

std::string describe(const Operation& op) {
  std::string s = op.kind == GateKind::Unitary2Q ? op.label : std::string(gate_name(op.kind));
  if (gate_has_angle(op.kind)) s += "(" + std::to_string(op.angle) + ")";
  for (std::size_t i = 0; i < op.qubits.size(); ++i) {
    s += (i == 0 ? " " : ",");
    s += "q[" + std::to_string(op.qubits[i]) + "]";
  }
  if (op.kind == GateKind::Measure) s += " -> c[" + std::to_string(op.clbit) + "]";
  return s;
}

bool is_unitary(const Matrix4& m, double tol) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Complex acc{0.0, 0.0};
      for (int k = 0; k < 4; ++k) acc += std::conj(m[k * 4 + i]) * m[k * 4 + j];
      const Complex expected = i == j ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      if (std::abs(acc - expected) > tol) return false;
    }
  }
  return true;
}

Circuit::Circuit(int num_qubits, int num_clbits)
    : num_qubits_(num_qubits), num_clbits_(num_clbits), measured_(num_qubits, false) {
  if (num_qubits < 0 || num_clbits < 0) throw ValidationError("negative register size");
}

void Circuit::check(const Operation& op) const {
  const int arity = gate_arity(op.kind);
  if (arity != 0 && static_cast<int>(op.qubits.size()) != arity) {
    throw ValidationError("gate " + std::string(gate_name(op.kind)) + " expects " +
                          std::to_string(arity) + " operands, got " +
                          std::to_string(op.qubits.size()));
  }
  if (op.kind == GateKind::Barrier && op.qubits.empty()) {
    throw ValidationError("barrier without operands");
  }
  std::set<int> seen;
  for (int q : op.qubits) {
    if (q < 0 || q >= num_qubits_) {
      throw ValidationError("qubit index " + std::to_string(q) + " out of range in '" +
                            describe(op) + "'");
    }
    if (!seen.insert(q).second) {
      throw ValidationError("duplicate operands in '" + describe(op) + "'");
    }
    if (measured_[q]) {
      throw ValidationError("operation '" + describe(op) + "' follows measurement of q[" +
                            std::to_string(q) + "]");
    }
  }
  if (op.kind == GateKind::Measure) {
    if (op.clbit < 0 || op.clbit >= num_clbits_) {
      throw ValidationError("clbit index " + std::to_string(op.clbit) + " out of range");
    }
  }
  if (gate_has_angle(op.kind) && !std::isfinite(op.angle)) {
    throw ValidationError("non-finite angle in " + std::string(gate_name(op.kind)));
  }
  if (op.kind == GateKind::Unitary2Q) {
    if (!op.matrix) throw ValidationError("unitary2q without matrix");
    if (!is_unitary(*op.matrix)) throw ValidationError("matrix of '" + op.label + "' is not unitary");
    if (!is_identifier(op.label) || gate_kind_from_name(op.label) || op.label == "measure" ||
        op.label == "barrier") {
      throw ValidationError("invalid unitary2q label '" + op.label + "'");
    }
  } else if (op.matrix) {
    throw ValidationError("matrix attached to non-unitary2q gate");
  }
}

Circuit& Circuit::append(Operation op) {
  check(op);
  if (op.kind == GateKind::Measure) measured_[op.qubits[0]] = true;
  ops_.push_back(std::move(op));
  return *this;
}

Circuit& Circuit::gate1(GateKind kind, int q) { return append({kind, {q}}); }

Circuit& Circuit::rz(double theta, int q) { return append({GateKind::RZ, {q}, theta}); }
Circuit& Circuit::ry(double theta, int q) { return append({GateKind::RY, {q}, theta}); }
Circuit& Circuit::cx(int control, int target) { return append({GateKind::CX, {control, target}}); }
Circuit& Circuit::cz(int a, int b) { return append({GateKind::CZ, {a, b}}); }
Circuit& Circuit::swap(int a, int b) { return append({GateKind::Swap, {a, b}}); }
Circuit& Circuit::cp(double theta, int control, int target) {
  return append({GateKind::CP, {control, target}, theta});
}
Circuit& Circuit::ccx(int c0, int c1, int target) { return append({GateKind::CCX, {c0, c1, target}}); }
Circuit& Circuit::ccz(int a, int b, int c) { return append({GateKind::CCZ, {a, b, c}}); }

Circuit& Circuit::unitary2q(const Matrix4& m, std::string label, int a, int b) {
  Operation op{GateKind::Unitary2Q, {a, b}};
  op.matrix = m;
  op.label = std::move(label);
  return append(std::move(op));
}

Circuit& Circuit::measure(int q, int c) {
  Operation op{GateKind::Measure, {q}};
  op.clbit = c;
  return append(std::move(op));
}

Circuit& Circuit::barrier(std::vector<int> qubits) {
  return append({GateKind::Barrier, std::move(qubits)});
}

Circuit& Circuit::barrier() {
  std::vector<int> all(num_qubits_);
  for (int q = 0; q < num_qubits_; ++q) all[q] = q;
  return barrier(std::move(all));
}

std::vector<int> Circuit::active_qubits() const {
  std::set<int> used;
  for (const auto& op : ops_) {
    if (op.kind == GateKind::Barrier) continue;
    used.insert(op.qubits.begin(), op.qubits.end());
  }
  return {used.begin(), used.end()};
}

std::vector<int> Circuit::measured_qubits() const {
  std::vector<int> out;
  for (int q = 0; q < num_qubits_; ++q) {
    if (measured_[q]) out.push_back(q);
  }
  return out;
}

Matrix2 gate_matrix_1q(const Operation& op) {
  using std::numbers::pi;
  const Complex i{0.0, 1.0};
  const double r = 1.0 / std::numbers::sqrt2;
  switch (op.kind) {
    case GateKind::Id:
      return {1, 0, 0, 1};
    case GateKind::X:
      return {0, 1, 1, 0};
    case GateKind::SX:
      return {Complex{0.5, 0.5}, Complex{0.5, -0.5}, Complex{0.5, -0.5}, Complex{0.5, 0.5}};
    case GateKind::RZ:
      return {std::exp(-i * (op.angle / 2)), 0, 0, std::exp(i * (op.angle / 2))};
    case GateKind::H:
      return {r, r, r, -r};
    case GateKind::Z:
      return {1, 0, 0, -1};
    case GateKind::S:
      return {1, 0, 0, i};
    case GateKind::Sdg:
      return {1, 0, 0, -i};
    case GateKind::T:
      return {1, 0, 0, std::exp(i * (pi / 4))};
    case GateKind::Tdg:
      return {1, 0, 0, std::exp(-i * (pi / 4))};
    case GateKind::RY: {
      const double c = std::cos(op.angle / 2), s = std::sin(op.angle / 2);
      return {c, -s, s, c};
    }
    default:
      throw std::logic_error("gate_matrix_1q: not a single-qubit gate: " +
                             std::string(gate_name(op.kind)));
  }
}

Matrix4 gate_matrix_2q(const Operation& op) {
  const Complex i{0.0, 1.0};
  switch (op.kind) {
    case GateKind::CX:
      return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
    case GateKind::CZ:
      return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
    case GateKind::Swap:
      return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
    case GateKind::CP:
      return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, std::exp(i * op.angle)};
    case GateKind::Unitary2Q:
      return *op.matrix;
    default:
      throw std::logic_error("gate_matrix_2q: not a two-qubit gate: " +
                             std::string(gate_name(op.kind)));
  }
}

}  // namespace qbudget
