#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nsk/bounds.hpp"
#include "nsk/field.hpp"
#include "nsk/params.hpp"
#include "nsk/sde.hpp"
#include "nsk/solver.hpp"
#include "nsk/states.hpp"
#include "nsk/uncertainty.hpp"

namespace {

nsk::FluidField1D ground_state_on(const std::vector<double>& grid) {
  const auto g = nsk::GaussianState::create(1.0, 0.0, 0.0, 0.0);
  return nsk::sample_on_grid(g, grid).field;
}

void BM_SpatialRhs(benchmark::State& state) {
  nsk::SolverConfig cfg;
  cfg.params = nsk::ModelParameters::create(1.0, 1.0, 0.1, 0.125, 0.0, 1.0);
  cfg.n_cells = static_cast<std::size_t>(state.range(0));
  cfg.eos = {1.0, 5.0 / 3.0};
  cfg.potential = {1.0, 0.0};
  const auto field = ground_state_on(nsk::cell_centers(cfg));
  for (auto _ : state) {
    auto r = nsk::spatial_rhs(field, cfg);
    benchmark::DoNotOptimize(r.dv_dt.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpatialRhs)->RangeMultiplier(4)->Range(256, 16384);

void BM_UncertaintyReport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto field = ground_state_on(nsk::uniform_grid(-8.0, 8.0, n));
  const auto c = nsk::natural_units().coefficients();
  for (auto _ : state) {
    auto rep = nsk::uncertainty_report(field, c, 1e-6);
    benchmark::DoNotOptimize(rep.margin);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UncertaintyReport)->RangeMultiplier(4)->Range(1024, 65536);

void BM_PropagateEnsemble(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = nsk::natural_units().coefficients();
  const nsk::Drift ou = [](double x) { return -x; };
  const auto start = nsk::sample_gaussian_ensemble(n, 1.0, 0.0, 7, 16.0);
  for (auto _ : state) {
    auto e = nsk::propagate_ensemble(start, ou, c.nu, 1e-3, 10);
    benchmark::DoNotOptimize(e.positions.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10);
}
BENCHMARK(BM_PropagateEnsemble)->RangeMultiplier(8)->Range(1024, 262144)->UseRealTime();

void BM_ScanPhaseDiagram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto cells = nsk::scan_phase_diagram({0.0, 2.0}, {0.0, 4.0}, n, n);
    benchmark::DoNotOptimize(cells.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_ScanPhaseDiagram)->Arg(51)->Arg(201)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
