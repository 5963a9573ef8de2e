#pragma once

// Independent dense-unitary builder: every gate is expanded to a full 2^n
// matrix from its textbook definition, without the library's kernels.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "qbudget/circuit.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat one_qubit(qbudget::GateKind k, double th) {
  using qbudget::GateKind;
  const double r = 1 / std::sqrt(2.0);
  const C i{0, 1};
  Mat m(2, 2);
  switch (k) {
    case GateKind::Id: m << 1, 0, 0, 1; break;
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::Z: m << 1, 0, 0, -1; break;
    case GateKind::S: m << 1, 0, 0, i; break;
    case GateKind::Sdg: m << 1, 0, 0, -i; break;
    case GateKind::T: m << 1, 0, 0, std::exp(i * std::numbers::pi / 4.0); break;
    case GateKind::Tdg: m << 1, 0, 0, std::exp(-i * std::numbers::pi / 4.0); break;
    // sqrt(X) = H S H
    case GateKind::SX: {
      Mat h(2, 2), s(2, 2);
      h << r, r, r, -r;
      s << 1, 0, 0, i;
      m = h * s * h;
      break;
    }
    case GateKind::RZ: m << std::exp(-i * th / 2.0), 0, 0, std::exp(i * th / 2.0); break;
    case GateKind::RY: m << std::cos(th / 2), -std::sin(th / 2), std::sin(th / 2), std::cos(th / 2); break;
    default: throw std::logic_error("not a 1q gate");
  }
  return m;
}

/// Full matrix of one operation; bit q of the index is qubit q.
inline Mat expand(const qbudget::Operation& op, int n) {
  using qbudget::GateKind;
  const int dim = 1 << n;
  Mat u = Mat::Zero(dim, dim);
  const auto& q = op.qubits;
  auto bit = [](int idx, int b) { return (idx >> b) & 1; };
  for (int col = 0; col < dim; ++col) {
    switch (op.kind) {
      case GateKind::CX: u(bit(col, q[0]) ? col ^ (1 << q[1]) : col, col) = 1; break;
      case GateKind::CZ: u(col, col) = bit(col, q[0]) && bit(col, q[1]) ? -1 : 1; break;
      case GateKind::CP:
        u(col, col) = bit(col, q[0]) && bit(col, q[1]) ? std::exp(C{0, op.angle}) : C{1};
        break;
      case GateKind::Swap: {
        int row = col & ~(1 << q[0]) & ~(1 << q[1]);
        row |= bit(col, q[0]) << q[1];
        row |= bit(col, q[1]) << q[0];
        u(row, col) = 1;
        break;
      }
      case GateKind::CCZ:
        u(col, col) = bit(col, q[0]) && bit(col, q[1]) && bit(col, q[2]) ? -1 : 1;
        break;
      case GateKind::CCX:
        u(bit(col, q[0]) && bit(col, q[1]) ? col ^ (1 << q[2]) : col, col) = 1;
        break;
      case GateKind::Unitary2Q: {
        const auto& m = *op.matrix;
        const int c = 2 * bit(col, q[0]) + bit(col, q[1]);
        const int rest = col & ~(1 << q[0]) & ~(1 << q[1]);
        for (int r = 0; r < 4; ++r) {
          u(rest | ((r >> 1) << q[0]) | ((r & 1) << q[1]), col) = m[r * 4 + c];
        }
        break;
      }
      case GateKind::Measure:
      case GateKind::Barrier:
        u(col, col) = 1;
        break;
      default: {
        const Mat m = one_qubit(op.kind, op.angle);
        const int b = bit(col, q[0]);
        const int rest = col & ~(1 << q[0]);
        u(rest, col) = m(0, b);
        u(rest | (1 << q[0]), col) = m(1, b);
      }
    }
  }
  return u;
}

inline Mat unitary(const qbudget::Circuit& c) {
  Mat u = Mat::Identity(1 << c.num_qubits(), 1 << c.num_qubits());
  for (const auto& op : c.ops()) u = expand(op, c.num_qubits()) * u;
  return u;
}

/// max |a - e^{i phi} b| with phi chosen from the largest entry of b.
inline double distance_up_to_phase(const Mat& a, const Mat& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const C phase = a(r, c) / b(r, c);
  return (a - (phase / std::abs(phase)) * b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
