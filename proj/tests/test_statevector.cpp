#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "qbudget/statevector.hpp"

using namespace qbudget;

TEST_CASE("initial state and limits") {
  StateVector s(3);
  CHECK(s.size() == 8);
  CHECK(s[0] == Complex(1.0));
  CHECK(s.norm() == 1.0);
  CHECK_THROWS_AS(StateVector(kMaxSimQubits + 1), ValidationError);
  CHECK_NOTHROW(StateVector(kMaxSimQubits));
}

TEST_CASE("kernels agree with the dense oracle") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Complex> amps(16);
  for (auto& a : amps) a = {g(rng), g(rng)};
  StateVector start(4, amps);
  start.normalize();

  Matrix4 u{};
  for (int i = 0; i < 4; ++i) u[i * 5] = 1.0;
  const double r = 1 / std::sqrt(2.0);
  u[5] = r;
  u[6] = Complex(0, r);
  u[9] = Complex(0, r);
  u[10] = r;

  Circuit c(4, 0);
  c.h(2).sx(0).rz(0.3, 3).ry(-1.1, 1).cx(3, 0).cz(1, 2).swap(0, 3).cp(0.7, 2, 0);
  c.ccz(0, 1, 3).ccx(3, 2, 1).t(1).sdg(0).unitary2q(u, "mix", 2, 1);

  StateVector s = start;
  for (const auto& op : c.ops()) s.apply(op);

  Eigen::VectorXcd v(16);
  for (int i = 0; i < 16; ++i) v(i) = start[i];
  const Eigen::VectorXcd expect = oracle::unitary(c) * v;
  for (int i = 0; i < 16; ++i) CHECK(std::abs(s[i] - expect(i)) < 1e-12);
  CHECK(std::abs(s.norm() - 1.0) < 1e-12);
}

TEST_CASE("paulis") {
  StateVector s(1);
  s.apply_x(0);
  CHECK(s[1] == Complex(1.0));
  s.apply_y(0);
  CHECK(std::abs(s[0] - Complex(0, -1)) < 1e-15);
  s.apply_z(0);
  CHECK(std::abs(s[0] - Complex(0, -1)) < 1e-15);
}

TEST_CASE("decay jump and projection renormalize") {
  const double r = 1 / std::sqrt(2.0);
  StateVector s(2, {r, 0, 0, r});  // (|00> + |11>)/sqrt2
  CHECK(s.probability_one(0) == doctest::Approx(0.5));
  StateVector jumped = s;
  jumped.decay_jump(0);
  CHECK(std::abs(jumped[2] - Complex(1.0)) < 1e-12);  // |q1=1, q0=0>
  StateVector projected = s;
  projected.project_zero(0);
  CHECK(std::abs(projected[0] - Complex(1.0)) < 1e-12);
  CHECK(projected.norm() == doctest::Approx(1.0));
}

TEST_CASE("state_fidelity") {
  StateVector a(2);
  a.apply_x(1);
  CHECK(state_fidelity(a, a) == doctest::Approx(1.0));
  StateVector b(2);
  CHECK(state_fidelity(a, b) == 0.0);
  std::vector<Complex> rotated(a.amplitudes().begin(), a.amplitudes().end());
  for (double phi : {0.1, 1.0, 2.5, -3.0}) {
    for (auto& x : rotated) x *= std::polar(1.0, phi);
    CHECK(state_fidelity(a, StateVector(2, rotated)) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(state_fidelity(a, StateVector(3)), ValidationError);
}
