#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qbudget/circuit.hpp"

namespace qbudget {

inline constexpr int kMaxSimQubits = 12;

/// Dense 2^n amplitude vector. Qubit q is bit q of the basis index.
class StateVector {
 public:
  StateVector() = default;
  /// |0...0> on `num_qubits` qubits (at most kMaxSimQubits).
  explicit StateVector(int num_qubits);
  StateVector(int num_qubits, std::vector<Complex> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amp_.size(); }
  std::span<const Complex> amplitudes() const { return amp_; }
  Complex operator[](std::size_t i) const { return amp_[i]; }

  void apply_1q(const Matrix2& m, int q);
  void apply_2q(const Matrix4& m, int a, int b);
  void apply_cx(int control, int target);
  void apply_ccz(int a, int b, int c);
  void apply_ccx(int c0, int c1, int target);
  void apply_x(int q);
  void apply_y(int q);
  void apply_z(int q);

  /// Applies any unitary operation; measure and barrier are no-ops.
  void apply(const Operation& op);

  double probability_one(int q) const;
  double norm() const;
  void normalize();
  /// Maps the state through |0><1| on q (the decay jump) and renormalizes.
  void decay_jump(int q);
  /// Projects q onto |0> and renormalizes.
  void project_zero(int q);

 private:
  int num_qubits_ = 0;
  std::vector<Complex> amp_;
};

/// |<a|b>|, insensitive to global phase. Throws on dimension mismatch.
double state_fidelity(const StateVector& a, const StateVector& b);

}  // namespace qbudget
