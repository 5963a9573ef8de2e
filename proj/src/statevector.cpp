#include "qbudget/statevector.hpp"

#include <cmath>
#include <numeric>

namespace qbudget {

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxSimQubits) {
    throw ValidationError("statevector limited to " + std::to_string(kMaxSimQubits) +
                          " qubits, requested " + std::to_string(num_qubits));
  }
  amp_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
  amp_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amp_(std::move(amplitudes)) {
  if (num_qubits < 0 || num_qubits > kMaxSimQubits) {
    throw ValidationError("statevector limited to " + std::to_string(kMaxSimQubits) + " qubits");
  }
  if (amp_.size() != (std::size_t{1} << num_qubits)) {
    throw ValidationError("amplitude count does not match 2^" + std::to_string(num_qubits));
  }
}

void StateVector::apply_1q(const Matrix2& m, int q) {
  const std::size_t bit = std::size_t{1} << q;
  const std::size_t dim = amp_.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const Complex a0 = amp_[i], a1 = amp_[i | bit];
    amp_[i] = m[0] * a0 + m[1] * a1;
    amp_[i | bit] = m[2] * a0 + m[3] * a1;
  }
}

void StateVector::apply_2q(const Matrix4& m, int a, int b) {
  const std::size_t ba = std::size_t{1} << a, bb = std::size_t{1} << b;
  const std::size_t dim = amp_.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & (ba | bb)) continue;
    const std::size_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
    const Complex v[4] = {amp_[idx[0]], amp_[idx[1]], amp_[idx[2]], amp_[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      amp_[idx[r]] = m[r * 4] * v[0] + m[r * 4 + 1] * v[1] + m[r * 4 + 2] * v[2] + m[r * 4 + 3] * v[3];
    }
  }
}

void StateVector::apply_cx(int control, int target) {
  const std::size_t bc = std::size_t{1} << control, bt = std::size_t{1} << target;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if ((i & bc) && !(i & bt)) std::swap(amp_[i], amp_[i | bt]);
  }
}

void StateVector::apply_ccz(int a, int b, int c) {
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b) | (std::size_t{1} << c);
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if ((i & mask) == mask) amp_[i] = -amp_[i];
  }
}

void StateVector::apply_ccx(int c0, int c1, int target) {
  const std::size_t mask = (std::size_t{1} << c0) | (std::size_t{1} << c1);
  const std::size_t bt = std::size_t{1} << target;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if ((i & mask) == mask && !(i & bt)) std::swap(amp_[i], amp_[i | bt]);
  }
}

void StateVector::apply_x(int q) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
  }
}

void StateVector::apply_y(int q) {
  const std::size_t bit = std::size_t{1} << q;
  const Complex i_unit{0.0, 1.0};
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amp_[i], a1 = amp_[i | bit];
    amp_[i] = -i_unit * a1;
    amp_[i | bit] = i_unit * a0;
  }
}

void StateVector::apply_z(int q) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) amp_[i] = -amp_[i];
  }
}

void StateVector::apply(const Operation& op) {
  const auto& q = op.qubits;
  switch (op.kind) {
    case GateKind::Measure:
    case GateKind::Barrier:
    case GateKind::Id:
      return;
    case GateKind::X:
      apply_x(q[0]);
      return;
    case GateKind::CX:
      apply_cx(q[0], q[1]);
      return;
    case GateKind::CCZ:
      apply_ccz(q[0], q[1], q[2]);
      return;
    case GateKind::CCX:
      apply_ccx(q[0], q[1], q[2]);
      return;
    default:
      break;
  }
  if (is_two_qubit(op.kind)) {
    apply_2q(gate_matrix_2q(op), q[0], q[1]);
  } else {
    apply_1q(gate_matrix_1q(op), q[0]);
  }
}

double StateVector::probability_one(int q) const {
  const std::size_t bit = std::size_t{1} << q;
  double p = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) p += std::norm(amp_[i]);
  }
  return p;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::runtime_error("cannot normalize the zero vector");
  for (auto& a : amp_) a /= n;
}

void StateVector::decay_jump(int q) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) continue;
    amp_[i] = amp_[i | bit];
    amp_[i | bit] = 0.0;
  }
  normalize();
}

void StateVector::project_zero(int q) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) amp_[i] = 0.0;
  }
  normalize();
}

double state_fidelity(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) {
    throw ValidationError("state_fidelity: dimension mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return std::min(1.0, std::abs(acc));
}

}  // namespace qbudget
