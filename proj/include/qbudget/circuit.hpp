#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qbudget {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

/// Row-major 4x4 complex matrix over |ab>, first operand `a` most significant:
/// basis index = 2*bit(a) + bit(b).
using Matrix4 = std::array<Complex, 16>;

/// Input that violates a documented contract (bad file, bad circuit, bad
/// calibration). The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GateKind : std::uint8_t {
  Id,
  X,
  SX,
  RZ,
  H,
  Z,
  S,
  Sdg,
  T,
  Tdg,
  RY,
  CX,
  CZ,
  Swap,
  CP,
  CCX,
  CCZ,
  Unitary2Q,
  Measure,
  Barrier,
};

/// QASM spelling of a gate kind ("unitary2q" for the opaque two-qubit kind).
std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

/// Number of qubit operands; 0 for barrier (variadic).
int gate_arity(GateKind kind);
bool gate_has_angle(GateKind kind);
bool is_two_qubit(GateKind kind);

struct Operation {
  GateKind kind = GateKind::Id;
  std::vector<int> qubits;
  double angle = 0.0;
  int clbit = -1;
  /// Only set for Unitary2Q.
  std::optional<Matrix4> matrix;
  std::string label;

  bool operator==(const Operation&) const = default;
};

/// Human-readable form, e.g. "cx q[0],q[1]".
std::string describe(const Operation& op);

bool is_unitary(const Matrix4& m, double tol = 1e-10);

class Circuit {
 public:
  Circuit() = default;
  Circuit(int num_qubits, int num_clbits);

  int num_qubits() const { return num_qubits_; }
  int num_clbits() const { return num_clbits_; }
  const std::vector<Operation>& ops() const { return ops_; }
  bool empty() const { return ops_.empty(); }

  /// Validates the operation against the circuit invariants before appending.
  Circuit& append(Operation op);

  Circuit& id(int q) { return gate1(GateKind::Id, q); }
  Circuit& x(int q) { return gate1(GateKind::X, q); }
  Circuit& sx(int q) { return gate1(GateKind::SX, q); }
  Circuit& h(int q) { return gate1(GateKind::H, q); }
  Circuit& z(int q) { return gate1(GateKind::Z, q); }
  Circuit& s(int q) { return gate1(GateKind::S, q); }
  Circuit& sdg(int q) { return gate1(GateKind::Sdg, q); }
  Circuit& t(int q) { return gate1(GateKind::T, q); }
  Circuit& tdg(int q) { return gate1(GateKind::Tdg, q); }
  Circuit& rz(double theta, int q);
  Circuit& ry(double theta, int q);
  Circuit& cx(int control, int target);
  Circuit& cz(int a, int b);
  Circuit& swap(int a, int b);
  Circuit& cp(double theta, int control, int target);
  Circuit& ccx(int c0, int c1, int target);
  Circuit& ccz(int a, int b, int c);
  Circuit& unitary2q(const Matrix4& m, std::string label, int a, int b);
  Circuit& measure(int q, int c);
  Circuit& barrier(std::vector<int> qubits);
  /// Barrier across every qubit.
  Circuit& barrier();

  /// Qubits that carry at least one non-barrier operation, ascending.
  std::vector<int> active_qubits() const;
  /// Qubits with a measure operation, ascending.
  std::vector<int> measured_qubits() const;

  bool operator==(const Circuit&) const = default;

 private:
  Circuit& gate1(GateKind kind, int q);
  void check(const Operation& op) const;

  int num_qubits_ = 0;
  int num_clbits_ = 0;
  std::vector<Operation> ops_;
  std::vector<bool> measured_;
};

/// Dense matrix of a single-qubit gate kind.
Matrix2 gate_matrix_1q(const Operation& op);
/// Dense matrix of a two-qubit gate (cx, cz, swap, cp, unitary2q).
Matrix4 gate_matrix_2q(const Operation& op);

}  // namespace qbudget
