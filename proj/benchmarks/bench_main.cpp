#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "polyharm/fields.hpp"
#include "polyharm/polytension.hpp"
#include "polyharm/reduction.hpp"
#include "polyharm/variational.hpp"

using namespace polyharm;

namespace {

GridMap torus_to_sphere(int nodes, EvalMode mode) {
  const double two_pi = 2 * std::numbers::pi;
  auto grid = std::make_shared<const Grid>(std::vector<int>{nodes, nodes}, std::vector<double>{two_pi, two_pi},
                                           std::vector<double>{0.0, 0.0}, 4);
  MapExpr expr(2, {"0.5*sin(x1)+0.3*sin(x2)", "0.4*cos(x1)", "1.3+0.3*sin(x1+x2)"});
  return GridMap::sample(DomainModel::flat_torus({two_pi, two_pi}), TargetModel::round_sphere_polar(3), grid, expr,
                         mode);
}

void BM_tension_k(benchmark::State& state, EvalMode mode) {
  const int k = static_cast<int>(state.range(0));
  const auto phi = torus_to_sphere(16 * k, mode);
  for (auto _ : state) benchmark::DoNotOptimize(tau_k(phi, k, 1).values.data());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(phi.grid->size()));
}

void BM_tension_es4(benchmark::State& state) {
  const auto phi = torus_to_sphere(64, EvalMode::analytic_jet);
  for (auto _ : state) benchmark::DoNotOptimize(tau4_es(phi, 1).values.data());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(phi.grid->size()));
}

void BM_residual(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto phi = torus_to_sphere(16 * k, EvalMode::analytic_jet);
  for (auto _ : state) benchmark::DoNotOptimize(residual(phi, k, ReducedKind::extended, 1).max_abs());
}

void BM_energy(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto phi = torus_to_sphere(16 * k, EvalMode::analytic_jet);
  for (auto _ : state) benchmark::DoNotOptimize(energy_k(phi, k, 1).value);
}

void BM_latitude_scan(benchmark::State& state) {
  const auto order = TensionOrder::order(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_k_harmonic_latitude(2, order, 1).size());
}

void BM_workers(benchmark::State& state) {
  const auto phi = torus_to_sphere(64, EvalMode::analytic_jet);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tau_k(phi, 4, workers).values.data());
}

}  // namespace

BENCHMARK_CAPTURE(BM_tension_k, grid_fd, EvalMode::grid_fd)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_tension_k, analytic_jet, EvalMode::analytic_jet)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tension_es4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_residual)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_latitude_scan)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_workers)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
