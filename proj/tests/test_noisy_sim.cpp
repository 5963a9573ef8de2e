#include <omp.h>

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qbudget/estimator.hpp"
#include "qbudget/models.hpp"
#include "qbudget/noisy_sim.hpp"
#include "qbudget/observables.hpp"

using namespace qbudget;

namespace {

/// One qubit whose only calibrated gate is x with the given cost.
BackendCalibration single_qubit(double x_error, double x_ns, double t1_us, double t2_us,
                                double readout = 0.0) {
  BackendCalibration cal;
  cal.name = "single";
  cal.num_qubits = 1;
  cal.qubits.push_back({t1_us, t2_us, readout, std::nullopt, std::nullopt});
  cal.add_gate({"x", {0}, x_error, x_ns});
  cal.add_gate({"rz", {0}, 0.0, 0.0});
  cal.measure_duration_ns = 1000;
  return cal;
}

Circuit physical_ising(const BackendCalibration& cal) {
  const Circuit logical = lower_to_basis(build_ising_ground_circuit(2.5));
  return apply_layout(logical, best_chains(cal, logical, 1)[0].layout, cal.coupling_map());
}

}  // namespace

TEST_CASE("ideal simulation") {
  SUBCASE("hadamard") {
    Circuit c(1, 0);
    c.h(0);
    const auto r = simulate_ideal(c);
    CHECK(std::abs(r.state[0] - Complex(1 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(r.state[1] - Complex(1 / std::sqrt(2.0))) < 1e-15);
    CHECK(r.distribution.empty());
  }
  SUBCASE("bell state") {
    Circuit c(2, 2);
    c.h(0).cx(0, 1).measure(0, 0).measure(1, 1);
    const auto r = simulate_ideal(c);
    REQUIRE(r.distribution.size() == 2);
    CHECK(r.distribution.at("00") == doctest::Approx(0.5));
    CHECK(r.distribution.at("11") == doctest::Approx(0.5));
  }
  SUBCASE("identity unitary2q") {
    Matrix4 id{};
    for (int i = 0; i < 4; ++i) id[i * 5] = 1.0;
    Circuit c(2, 0);
    c.x(1).unitary2q(id, "ident", 0, 1);
    const auto r = simulate_ideal(c);
    CHECK(r.state[2] == Complex(1.0));
  }
  SUBCASE("clbit order") {
    Circuit c(3, 2);
    c.x(2).measure(2, 0).measure(0, 1);
    CHECK(simulate_ideal(c).distribution.at("01") == doctest::Approx(1.0));
  }
  SUBCASE("too many qubits") {
    CHECK_THROWS_AS(simulate_ideal(Circuit(kMaxSimQubits + 1, 0)), ValidationError);
  }
}

TEST_CASE("bitstring convention") {
  CHECK(bitstring(1, 3) == "001");
  CHECK(bitstring(6, 3) == "110");
  CHECK(bitstring(0, 0).empty());
}

TEST_CASE("noiseless limit matches Born sampling") {
  const auto cal = noiseless(synth_calibration(4, 3, Topology::Full));
  const Circuit c = lower_to_basis(build_grover(3, 5));
  const std::uint64_t shots = 40000;
  const auto run = simulate_noisy(c, cal, shots, 99);
  CHECK(run.clean_fraction == 1.0);
  CHECK(run.avg_state_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  const auto ideal = simulate_ideal(c).distribution;
  double chi2 = 0.0;
  std::uint64_t total = 0;
  for (const auto& [k, p] : ideal) {
    const double expected = p * shots;
    const double seen = run.counts.count(k) ? static_cast<double>(run.counts.at(k)) : 0.0;
    chi2 += (seen - expected) * (seen - expected) / expected;
  }
  for (const auto& [k, n] : run.counts) {
    CHECK(ideal.count(k) == 1);
    total += n;
  }
  CHECK(total == shots);
  CHECK(ideal.size() == 8);
  CHECK(chi2 < 24.32);  // chi-square, 7 dof, p = 0.001
}

TEST_CASE("relaxation over T1 ln 2 halves the excited population") {
  const double t1 = 50.0;
  const auto cal = single_qubit(0.0, t1 * 1e3 * std::numbers::ln2, t1, 2 * t1);
  Circuit c(1, 1);
  c.x(0).measure(0, 0);
  const auto run = simulate_noisy(c, cal, 100000, 5);
  const double zeros = static_cast<double>(run.counts.at("0")) / 100000.0;
  CHECK(std::abs(zeros - 0.5) < 0.01);
}

TEST_CASE("certain gate error leaves no clean trajectory") {
  const auto cal = single_qubit(1.0, 30.0, INFINITY, INFINITY);
  Circuit c(1, 1);
  c.x(0).measure(0, 0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto run = simulate_noisy(c, cal, 200, seed);
    CHECK(run.clean_fraction == 0.0);
    CHECK(run.avg_state_fidelity <= 1.0);
  }
}

TEST_CASE("readout flips follow p10 and p01") {
  auto cal = single_qubit(0.0, 30.0, INFINITY, INFINITY);
  cal.qubits[0].p10 = 1.0;
  cal.qubits[0].p01 = 0.0;
  Circuit zero(1, 1);
  zero.measure(0, 0);
  auto run = simulate_noisy(zero, cal, 50, 1);
  CHECK(run.counts.at("1") == 50);
  CHECK(run.clean_fraction == 0.0);
  CHECK(run.avg_state_fidelity == 1.0);
  Circuit one(1, 1);
  one.x(0).measure(0, 0);
  run = simulate_noisy(one, cal, 50, 1);
  CHECK(run.counts.at("1") == 50);
  CHECK(run.clean_fraction == 1.0);
}

TEST_CASE("parallel and serial runs are identical") {
  const auto cal = synth_calibration(8, 8, Topology::Ring);
  const Circuit c = physical_ising(cal);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  const auto par = simulate_noisy(c, cal, 3000, 17);
  omp_set_num_threads(saved);
  const auto ser = simulate_noisy_serial(c, cal, 3000, 17);
  CHECK(par == ser);
  CHECK(simulate_noisy(c, cal, 3000, 18).counts != ser.counts);
}

TEST_CASE("clean fraction tracks S_T and bounds the fidelity") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto cal = synth_calibration(seed, 8, Topology::Ring);
    const Circuit c = physical_ising(cal);
    const double s = success_probability(c, cal).success;
    const std::uint64_t shots = 20000;
    const auto run = simulate_noisy(c, cal, shots, seed);
    const double se = std::sqrt(s * (1 - s) / shots);
    CHECK(std::abs(run.clean_fraction - s) <= 3 * se);
    CHECK(run.clean_fraction <= run.avg_state_fidelity + 1e-12);
    CHECK(run.avg_state_fidelity <= 1.0);
    std::uint64_t total = 0;
    for (const auto& [k, n] : run.counts) total += n;
    CHECK(total == shots);
  }
}

TEST_CASE("missing calibration is reported") {
  const auto cal = single_qubit(0.0, 30.0, 100, 100);
  Circuit c(1, 0);
  c.sx(0);
  CHECK_THROWS_AS(simulate_noisy(c, cal, 10, 0), ValidationError);
  Circuit h(1, 0);
  h.h(0);
  CHECK_THROWS_AS(simulate_noisy(h, cal, 10, 0), ValidationError);
  Circuit x(1, 0);
  x.x(0);
  CHECK_THROWS_AS(simulate_noisy(x, cal, 0, 0), ValidationError);
}

TEST_CASE("run result JSON round trip") {
  const auto cal = synth_calibration(8, 8, Topology::Ring);
  const auto run = simulate_noisy(physical_ising(cal), cal, 500, 2);
  CHECK(RunResult::from_json(run.to_json()) == run);
  CHECK_THROWS_AS(RunResult::from_json(R"({"shots": 3, "counts": {"01": 2}})"), ValidationError);
  CHECK_THROWS_AS(RunResult::from_json("[]"), ValidationError);
}

TEST_CASE("compact_active keeps only touched qubits") {
  Circuit c(6, 2);
  c.barrier().x(4).cx(4, 2).measure(2, 0).measure(4, 1);
  const auto cc = compact_active(c);
  CHECK(cc.physical == std::vector<int>{2, 4});
  CHECK(cc.circuit.num_qubits() == 2);
  CHECK(cc.circuit.ops()[2].qubits == std::vector<int>{1, 0});
  CHECK(cc.source.front() == 0);
}
