#include <omp.h>

#include <cmath>
#include <set>

#include "doctest.h"
#include "qbudget/observables.hpp"
#include "qbudget/report.hpp"
#include "qbudget/sweep.hpp"

using namespace qbudget;

namespace {

SweepRow fidelity_row(double s_total, double fidelity) {
  SweepRow r;
  r.model = "grover2";
  r.backend = "synth-1";
  r.layout = {0, 1};
  r.shots = 100;
  r.seed = 7;
  r.s_total = s_total;
  r.p_total = 1.0 - s_total;
  r.avg_state_fidelity = fidelity;
  r.classical_fidelity = fidelity;
  r.observable = "none";
  r.observable_sim = NAN;
  r.observable_phys = NAN;
  std::tie(r.bound_value, r.within_bound) = evaluate_bound(r);
  return r;
}

SweepConfig small(ModelId id) {
  SweepConfig c;
  c.model = id;
  c.backends = 2;
  c.layouts_per_backend = 3;
  c.shots = 400;
  c.seed = 11;
  return c;
}

}  // namespace

TEST_CASE("spread_indices") {
  CHECK(spread_indices(0, 4).empty());
  CHECK(spread_indices(5, 0).empty());
  CHECK(spread_indices(3, 8) == std::vector<std::size_t>{0, 1, 2});
  CHECK(spread_indices(10, 1) == std::vector<std::size_t>{0});
  CHECK(spread_indices(10, 2) == std::vector<std::size_t>{0, 9});
  for (std::size_t total : {9u, 40u, 336u}) {
    for (std::size_t count : {2u, 3u, 8u}) {
      const auto idx = spread_indices(total, count);
      REQUIRE(idx.size() == count);
      CHECK(idx.front() == 0);
      CHECK(idx.back() == total - 1);
      CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == count);
      for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i] > idx[i - 1]);
    }
  }
}

TEST_CASE("bound rules") {
  SUBCASE("fidelity") {
    CHECK(fidelity_row(0.9, 0.95).within_bound);
    CHECK(fidelity_row(0.9, 0.9).within_bound);
    CHECK_FALSE(fidelity_row(0.9, 0.89).within_bound);
    CHECK(fidelity_row(0.9, 0.95).bound_value == 0.9);
  }
  SUBCASE("ising magnetization ratio") {
    SweepRow r = fidelity_row(0.9, 0.95);
    r.model = "ising";
    r.observable = "magnetization_ratio";
    r.observable_sim = -3.2;
    r.p_total = 0.1;
    const auto [bound, ok] = evaluate_bound(r);
    CHECK(bound == doctest::Approx(1.0 - 8 * 0.1 / 3.2).epsilon(1e-15));
    r.observable_phys = -3.2 * 0.76;
    CHECK(evaluate_bound(r).second);
    r.observable_phys = -3.2 * 0.74;
    CHECK_FALSE(evaluate_bound(r).second);
    (void)ok;
  }
  SUBCASE("qpe phase") {
    SweepRow r = fidelity_row(0.8, 0.0);
    r.model = "qpe";
    r.observable = "phase";
    r.observable_sim = 0.0;
    r.p_total = 0.2;
    r.observable_phys = 0.17;
    CHECK(evaluate_bound(r).first == doctest::Approx(0.2 * 7.0 / 8.0));
    CHECK(evaluate_bound(r).second);
    r.observable_phys = 0.18;
    CHECK_FALSE(evaluate_bound(r).second);
    r.model = "qpe-t4";
    CHECK(evaluate_bound(r).first == doctest::Approx(0.2 * 15.0 / 16.0));
    CHECK(evaluate_bound(r).second);
  }
}

TEST_CASE("models for the sweep") {
  for (ModelId id : {ModelId::Ising, ModelId::Qpe, ModelId::Grover2, ModelId::Grover3}) {
    CHECK(parse_model(model_name(id)) == id);
    const auto m = make_model(id);
    CHECK(is_lowered(m.logical));
    double total = 0.0;
    for (const auto& [k, p] : m.ideal) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(parse_model("shor"), ValidationError);
  CHECK(make_model(ModelId::Qpe).observable_sim == 0.0);
  CHECK(make_model(ModelId::Grover3).observable == "none");
  CHECK(parse_noise_mode("readout-only") == NoiseMode::ReadoutOnly);
  CHECK_THROWS_AS(parse_noise_mode("loud"), ValidationError);
}

TEST_CASE("csv round trip and errors") {
  std::vector<SweepRow> rows = {fidelity_row(0.9, 0.95), fidelity_row(0.123456789012345678, 0.1)};
  rows[1].layout = {3, 1, 4};
  rows[1].seed = 18446744073709551615ULL;
  const std::string text = to_csv(rows);
  CHECK(text.rfind("model,backend,layout,shots,seed,p_total,s_total,avg_state_fidelity,"
                   "classical_fidelity,observable,observable_sim,observable_phys,bound_value,"
                   "within_bound\n",
                   0) == 0);
  CHECK(text.find("3-1-4") != std::string::npos);
  CHECK(text.find(",none,,,") != std::string::npos);

  const auto parsed = parse_csv(text);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].line == 2);
  CHECK(parsed[1].line == 3);
  CHECK(to_csv({parsed[0].row, parsed[1].row}) == text);
  CHECK(parsed[1].row.s_total == rows[1].s_total);
  CHECK(parsed[1].row.seed == rows[1].seed);
  CHECK(std::isnan(parsed[0].row.observable_sim));

  SUBCASE("mitigation columns") {
    for (auto& r : rows) {
      r.s_total_no_meas = 0.95;
      r.classical_fidelity_mitigated = 0.97;
      r.within_bound_mitigated = true;
    }
    const std::string mt = to_csv(rows);
    CHECK(mt.find("within_bound,s_total_no_meas,classical_fidelity_mitigated,within_bound_mitigated\n") !=
          std::string::npos);
    const auto back = parse_csv(mt);
    CHECK(back[1].row.classical_fidelity_mitigated == 0.97);
    CHECK(to_csv({back[0].row, back[1].row}) == mt);
  }
  SUBCASE("malformed rows name their line") {
    std::string bad = text;
    bad.replace(bad.find("synth-1,3-1-4,100"), 17, "synth-1,3-1-4,1x0");
    CHECK_THROWS_WITH_AS(parse_csv(bad), doctest::Contains("line 3"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_csv(text + "grover2,b,0,1\n"), doctest::Contains("line 4"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_csv("a,b\n"), doctest::Contains("line 1"), ValidationError);
  }
  SUBCASE("empty") {
    CHECK_THROWS_WITH_AS(parse_csv(""), "CSV is empty", ValidationError);
    CHECK_THROWS_AS(parse_csv("\n\n"), ValidationError);
    CHECK_THROWS_AS(report_csv(""), ValidationError);
  }
}

TEST_CASE("report") {
  CHECK(format_fraction(2, 276) == "2/276 (0.72%)");
  CHECK(format_fraction(0, 10) == "0/10 (0.00%)");

  std::vector<SweepRow> rows;
  for (int i = 0; i < 276; ++i) rows.push_back(fidelity_row(0.9, 0.91 + 0.0001 * i));
  rows[10] = fidelity_row(0.9, 0.85);
  rows[200] = fidelity_row(0.9, 0.8);
  const SweepReport rep = report_csv(to_csv(rows));
  REQUIRE(rep.models.size() == 1);
  const auto& m = rep.models[0];
  CHECK(m.rows == 276);
  CHECK(m.violations == 2);
  CHECK(m.fidelity_violations == 2);
  CHECK(m.inconsistent == 0);
  CHECK(m.violation_lines == std::vector<int>{12, 202});
  CHECK(m.min_fidelity == 0.8);
  CHECK(rep.to_text().find("2/276 (0.72%)") != std::string::npos);

  SUBCASE("all within") {
    rows[10] = rows[200] = fidelity_row(0.9, 0.95);
    const auto ok = report_csv(to_csv(rows));
    CHECK(ok.models[0].violations == 0);
    CHECK(ok.to_text().find("0/276 (0.00%)") != std::string::npos);
  }
  SUBCASE("flag that disagrees with the columns") {
    rows[5].within_bound = false;
    CHECK(report_csv(to_csv(rows)).models[0].inconsistent == 1);
  }
}

TEST_CASE("sweep") {
  SUBCASE("row count and determinism") {
    for (ModelId id : {ModelId::Ising, ModelId::Qpe, ModelId::Grover2, ModelId::Grover3}) {
      const auto a = run_sweep(small(id));
      CHECK(a.size() == 6);
      CHECK(to_csv(a) == to_csv(run_sweep(small(id))));
      for (const auto& r : a) {
        CHECK(r.p_total == doctest::Approx(1.0 - r.s_total).epsilon(1e-15));
        CHECK(evaluate_bound(r).second == r.within_bound);
      }
    }
  }
  SUBCASE("zero noise") {
    for (ModelId id : {ModelId::Ising, ModelId::Qpe, ModelId::Grover2, ModelId::Grover3}) {
      SweepConfig c = small(id);
      c.noise = NoiseMode::None;
      for (const auto& r : run_sweep(c)) {
        CHECK(r.s_total == 1.0);
        CHECK(r.avg_state_fidelity == 1.0);
        CHECK(r.clean_fraction == 1.0);
        if (id != ModelId::Ising) {
          CHECK(r.within_bound);
          continue;
        }
        // The ising bound is exactly 1 here, so only shot noise decides the
        // flag; the sampled magnetization must sit within 5 standard errors.
        const auto m = make_model(id);
        double second = 0.0;
        for (const auto& [k, p] : m.ideal) second += p * std::pow(magnetization(Distribution{{k, 1.0}}), 2);
        const double se = std::sqrt((second - m.observable_sim * m.observable_sim) / c.shots);
        CHECK(std::abs(r.observable_phys - r.observable_sim) <= 5 * se);
        CHECK(r.bound_value == 1.0);
      }
    }
  }
  SUBCASE("thread count does not change the output") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = to_csv(run_sweep(small(ModelId::Qpe)));
    omp_set_num_threads(4);
    const auto four = to_csv(run_sweep(small(ModelId::Qpe)));
    omp_set_num_threads(saved);
    CHECK(one == four);
  }
  SUBCASE("different seeds differ") {
    SweepConfig c = small(ModelId::Grover2);
    const auto a = to_csv(run_sweep(c));
    c.seed = 12;
    CHECK(a != to_csv(run_sweep(c)));
  }
  SUBCASE("mitigated sweep under readout-only noise") {
    SweepConfig c = small(ModelId::Grover2);
    c.noise = NoiseMode::ReadoutOnly;
    c.mitigate = true;
    // Below ~1e6 shots the sampling noise on unpopulated outcomes alone costs
    // more than 1e-3 of Bhattacharyya fidelity.
    c.shots = 1000000;
    for (const auto& r : run_sweep(c)) {
      REQUIRE(r.classical_fidelity_mitigated.has_value());
      CHECK(*r.s_total_no_meas == 1.0);
      CHECK(*r.classical_fidelity_mitigated >= 0.999);
    }
  }
  SUBCASE("qpe with a wider register") {
    SweepConfig c = small(ModelId::Qpe);
    c.options.qpe_t = 4;
    c.backends = 1;
    c.layouts_per_backend = 1;
    c.noise = NoiseMode::None;
    const auto rows = run_sweep(c);
    CHECK(rows[0].model == "qpe-t4");
    CHECK(rows[0].layout.size() == 5);
  }
}
