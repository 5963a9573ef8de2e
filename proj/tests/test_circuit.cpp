#include "doctest.h"
#include "qbudget/circuit.hpp"

using namespace qbudget;

TEST_CASE("builder records operations in order") {
  Circuit c(2, 2);
  c.h(0).cx(0, 1).measure(0, 0).measure(1, 1);
  REQUIRE(c.ops().size() == 4);
  CHECK(c.ops()[0].kind == GateKind::H);
  CHECK(c.ops()[1].qubits == std::vector<int>{0, 1});
  CHECK(c.ops()[3].clbit == 1);
  CHECK(c.measured_qubits() == std::vector<int>{0, 1});
}

TEST_CASE("operand validation") {
  Circuit c(3, 1);
  CHECK_THROWS_AS(c.cx(0, 0), ValidationError);
  CHECK_THROWS_AS(c.x(3), ValidationError);
  CHECK_THROWS_AS(c.ccz(0, 1, 1), ValidationError);
  CHECK_THROWS_AS(c.measure(0, 1), ValidationError);
  CHECK_THROWS_AS(c.rz(std::nan(""), 0), ValidationError);
  CHECK_THROWS_AS(c.rz(INFINITY, 0), ValidationError);
  Operation bad{GateKind::CX, {0}};
  CHECK_THROWS_AS(c.append(bad), ValidationError);
}

TEST_CASE("measurement is terminal per qubit") {
  Circuit c(2, 2);
  c.measure(0, 0);
  CHECK_THROWS_WITH_AS(c.x(0), doctest::Contains("follows measurement"), ValidationError);
  CHECK_THROWS_AS(c.cx(1, 0), ValidationError);
  CHECK_NOTHROW(c.x(1));
}

TEST_CASE("unitary2q checks") {
  Matrix4 id{};
  for (int i = 0; i < 4; ++i) id[i * 5] = 1.0;
  Circuit c(2, 0);
  CHECK_NOTHROW(c.unitary2q(id, "ident", 0, 1));
  Matrix4 bad = id;
  bad[0] = 2.0;
  CHECK_THROWS_AS(c.unitary2q(bad, "bad", 0, 1), ValidationError);
  CHECK_THROWS_AS(c.unitary2q(id, "cx", 0, 1), ValidationError);
  CHECK_THROWS_AS(c.unitary2q(id, "9lives", 0, 1), ValidationError);
  CHECK(is_unitary(id));
}

TEST_CASE("active qubits skip barrier-only qubits") {
  Circuit c(4, 1);
  c.barrier();
  c.x(2).measure(1, 0);
  CHECK(c.active_qubits() == std::vector<int>{1, 2});
}

TEST_CASE("gate names round trip") {
  for (int k = 0; k <= static_cast<int>(GateKind::Barrier); ++k) {
    const auto kind = static_cast<GateKind>(k);
    if (kind == GateKind::Unitary2Q) continue;
    CHECK(gate_kind_from_name(gate_name(kind)) == kind);
  }
  CHECK_FALSE(gate_kind_from_name("u3").has_value());
}
