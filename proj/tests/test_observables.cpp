#include <cmath>

#include "doctest.h"
#include "qbudget/observables.hpp"

using namespace qbudget;

TEST_CASE("classical fidelity") {
  const Distribution p{{"0", 1.0}};
  const Distribution q{{"0", 0.5}, {"1", 0.5}};
  CHECK(classical_fidelity(p, p) == doctest::Approx(1.0));
  CHECK(classical_fidelity(p, Distribution{{"1", 1.0}}) == 0.0);
  CHECK(classical_fidelity(p, q) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(classical_fidelity(q, p) == classical_fidelity(p, q));
  CHECK_THROWS_AS(classical_fidelity(p, Distribution{{"0", 0.9}}), ValidationError);
  CHECK_NOTHROW(classical_fidelity(p, Distribution{{"0", 1.0 + 5e-10}}));
}

TEST_CASE("magnetization") {
  CHECK(magnetization(Counts{{"1111", 20}}) == -4.0);
  CHECK(magnetization(Counts{{"0000", 3}}) == 4.0);
  CHECK(magnetization(Counts{{"0000", 1}, {"1111", 1}}) == 0.0);
  CHECK(magnetization(Counts{{"0001", 1}, {"0011", 1}}) == 1.0);
  CHECK_THROWS_AS(magnetization(Counts{}), ValidationError);
}

TEST_CASE("phase estimate") {
  CHECK(phase_estimate(Counts{{"000", 100}}) == 0.0);
  CHECK(phase_estimate(Counts{{"100", 7}}) == 0.5);
  CHECK(phase_estimate(Distribution{{"000", 0.9}, {"111", 0.1}}) == doctest::Approx(0.0875));
  CHECK_THROWS_AS(phase_estimate(Counts{}), ValidationError);
}

TEST_CASE("marginal keeps clbits in order") {
  const Counts c{{"1010", 2}, {"0011", 3}};
  const Counts m = marginal(c, {0, 1});
  CHECK(m.at("10") == 2);
  CHECK(m.at("11") == 3);
  CHECK(marginal(c, {3}).at("1") == 2);
  CHECK_THROWS_AS(marginal(c, {4}), ValidationError);
}

TEST_CASE("to_distribution") {
  const auto d = to_distribution(Counts{{"0", 1}, {"1", 3}});
  CHECK(d.at("1") == 0.75);
}
