// Shot loop: OpenMP kernel against the serial reference.
//   ./bench_shots --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>
#include <omp.h>

#include "qbudget/estimator.hpp"
#include "qbudget/sweep.hpp"

using namespace qbudget;

namespace {

struct Placed {
  Circuit circuit;
  BackendCalibration cal;
};

Placed placed(ModelId id) {
  const ModelInstance m = make_model(id);
  BackendCalibration cal = synth_calibration(7, default_backend_qubits(id), default_topology(id));
  const Layout layout = best_chains(cal, m.logical, 1)[0].layout;
  return {apply_layout(m.logical, layout, cal.coupling_map()), std::move(cal)};
}

template <RunResult (*Sim)(const Circuit&, const BackendCalibration&, std::uint64_t, std::uint64_t)>
void shots(benchmark::State& state) {
  const Placed p = placed(static_cast<ModelId>(state.range(0)));
  const auto n = static_cast<std::uint64_t>(state.range(1));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(Sim(p.circuit, p.cal, n, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.counters["threads"] = omp_get_max_threads();
}

void args(benchmark::internal::Benchmark* b) {
  for (ModelId id : {ModelId::Ising, ModelId::Grover3}) b->Args({static_cast<long>(id), 20000});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(shots<simulate_noisy_serial>)->Name("shots/serial")->Apply(args);
BENCHMARK(shots<simulate_noisy>)->Name("shots/openmp")->Apply(args);

BENCHMARK_MAIN();
