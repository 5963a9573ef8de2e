#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "qbudget/lowering.hpp"
#include "qbudget/models.hpp"

using namespace qbudget;
using std::numbers::pi;

namespace {

double lowered_distance(const Circuit& c) {
  const Circuit low = lower_to_basis(c);
  CHECK(is_lowered(low));
  return oracle::distance_up_to_phase(oracle::unitary(low), oracle::unitary(c));
}

}  // namespace

TEST_CASE("h lowers to rz sx rz") {
  Circuit c(1, 0);
  c.h(0);
  const Circuit low = lower_to_basis(c);
  REQUIRE(low.ops().size() == 3);
  CHECK(low.ops()[0].kind == GateKind::RZ);
  CHECK(low.ops()[1].kind == GateKind::SX);
  CHECK(low.ops()[2].kind == GateKind::RZ);
  CHECK(lowered_distance(c) < 1e-12);
}

TEST_CASE("swap lowers to three cx, exactly") {
  Circuit c(2, 0);
  c.swap(0, 1);
  const Circuit low = lower_to_basis(c);
  REQUIRE(low.ops().size() == 3);
  for (const auto& op : low.ops()) CHECK(op.kind == GateKind::CX);
  CHECK((oracle::unitary(low) - oracle::unitary(c)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("ccz lowers with six cx") {
  Circuit c(3, 0);
  c.ccz(0, 1, 2);
  const Circuit low = lower_to_basis(c);
  int cx = 0;
  for (const auto& op : low.ops()) cx += op.kind == GateKind::CX;
  CHECK(cx == 6);
  oracle::Mat diag = oracle::Mat::Identity(8, 8);
  diag(7, 7) = -1;
  CHECK(oracle::distance_up_to_phase(oracle::unitary(low), diag) < 1e-9);
}

TEST_CASE("every gate kind lowers to an equivalent unitary") {
  const double th = 0.7312;
  auto one = [](auto&& f) {
    Circuit c(3, 0);
    f(c);
    return c;
  };
  std::vector<Circuit> cases = {
      one([](Circuit& c) { c.id(0); }),         one([](Circuit& c) { c.x(1); }),
      one([](Circuit& c) { c.sx(2); }),         one([&](Circuit& c) { c.rz(th, 0); }),
      one([](Circuit& c) { c.h(1); }),          one([](Circuit& c) { c.z(2); }),
      one([](Circuit& c) { c.s(0); }),          one([](Circuit& c) { c.sdg(1); }),
      one([](Circuit& c) { c.t(2); }),          one([](Circuit& c) { c.tdg(0); }),
      one([&](Circuit& c) { c.ry(th, 1); }),    one([&](Circuit& c) { c.ry(-2.9, 0); }),
      one([](Circuit& c) { c.cx(2, 0); }),      one([](Circuit& c) { c.cz(0, 2); }),
      one([](Circuit& c) { c.swap(1, 2); }),    one([&](Circuit& c) { c.cp(th, 2, 1); }),
      one([](Circuit& c) { c.cp(-pi / 4, 0, 1); }), one([](Circuit& c) { c.ccx(0, 1, 2); }),
      one([](Circuit& c) { c.ccx(2, 0, 1); }),  one([](Circuit& c) { c.ccz(1, 2, 0); }),
  };
  for (const auto& c : cases) CHECK(lowered_distance(c) < 1e-9);
}

TEST_CASE("unitary2q, measure and barrier pass through") {
  const Circuit ising = build_ising_ground_circuit(2.5);
  const Circuit low = lower_to_basis(ising);
  int u2 = 0;
  for (const auto& op : low.ops()) u2 += op.kind == GateKind::Unitary2Q;
  CHECK(u2 == 10);
  CHECK(low.measured_qubits() == ising.measured_qubits());
}

TEST_CASE("random circuits on four qubits stay equivalent") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> gate(0, 16), qubit(0, 3);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int trial = 0; trial < 25; ++trial) {
    Circuit c(4, 0);
    for (int g = 0; g < 14; ++g) {
      int a = qubit(rng), b = qubit(rng), d = qubit(rng);
      while (b == a) b = qubit(rng);
      while (d == a || d == b) d = qubit(rng);
      switch (gate(rng)) {
        case 0: c.h(a); break;
        case 1: c.x(a); break;
        case 2: c.sx(a); break;
        case 3: c.rz(angle(rng), a); break;
        case 4: c.ry(angle(rng), a); break;
        case 5: c.z(a); break;
        case 6: c.s(a); break;
        case 7: c.sdg(a); break;
        case 8: c.t(a); break;
        case 9: c.tdg(a); break;
        case 10: c.cx(a, b); break;
        case 11: c.cz(a, b); break;
        case 12: c.swap(a, b); break;
        case 13: c.cp(angle(rng), a, b); break;
        case 14: c.ccx(a, b, d); break;
        case 15: c.ccz(a, b, d); break;
        default: c.id(a); break;
      }
    }
    CHECK(lowered_distance(c) < 1e-9);
  }
}

TEST_CASE("reference circuits lower to equivalent unitaries") {
  for (const Circuit& c : {build_ising_ground_circuit(2.5, false), build_grover(3, 5),
                           build_grover(2, 2)}) {
    CHECK(lowered_distance(c) < 1e-9);
  }
}

TEST_CASE("apply_layout") {
  Circuit c(2, 2);
  c.h(0).cx(0, 1).measure(0, 0).measure(1, 1);

  SUBCASE("identity on a full backend") {
    const CouplingMap full{2, {{0, 1}}};
    CHECK(apply_layout(c, Layout::identity(2), full) == c);
  }
  SUBCASE("remapped onto a coupled pair") {
    const CouplingMap line{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}};
    const Circuit p = apply_layout(c, Layout{{3, 4}}, line);
    CHECK(p.num_qubits() == 5);
    CHECK(p.ops()[1].qubits == std::vector<int>{3, 4});
    CHECK(p.ops()[3].qubits == std::vector<int>{4});
  }
  SUBCASE("uncoupled pair names the gate") {
    const CouplingMap sparse{5, {{0, 1}}};
    CHECK_THROWS_WITH_AS(apply_layout(c, Layout{{3, 4}}, sparse), doctest::Contains("cx"), ValidationError);
  }
  SUBCASE("non-injective layout") {
    const CouplingMap full{3, {{0, 1}, {1, 2}, {0, 2}}};
    CHECK_THROWS_AS(apply_layout(c, Layout{{1, 1}}, full), ValidationError);
    CHECK_THROWS_AS(apply_layout(c, Layout{{1, 7}}, full), ValidationError);
    CHECK_THROWS_AS(apply_layout(c, Layout{{1}}, full), ValidationError);
  }
}
