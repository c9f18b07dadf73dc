// Serial reference kernels against their OpenMP versions.
#include "twist/exact_engine.hpp"
#include "twist/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace twist;

namespace {

SpinState random_state(int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  SpinState s{n, CVector(n + 1)};
  for (int i = 0; i <= n; ++i) s.amplitudes[i] = Complex(g(rng), g(rng));
  s.amplitudes.normalize();
  return s;
}

const TwistingTensor kTensor =
    TwistingTensor::from_components({1.0, 0.1, 0.6, 0.2, -0.3, 0.15}, Vec3(0.4, 0.0, -0.7));

template <bool Parallel>
void husimi(benchmark::State& state) {
  const SpinState s = random_state(static_cast<int>(state.range(0)));
  const GridSpec grid{181, 360};
  std::vector<double> out;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::husimi_grid(s, grid, out);
    else kernels::husimi_grid_serial(s, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}

template <bool Parallel>
void landscape(benchmark::State& state) {
  const GridSpec grid{static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0))};
  std::vector<double> e, r;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::landscape_grid(kTensor, 100, grid, e, r);
    else kernels::landscape_grid_serial(kTensor, 100, grid, e, r);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}

template <bool Parallel>
void band_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BandMatrix h = build_hamiltonian_band(kTensor, angular_momentum_matrices(n));
  const SpinState s = random_state(n);
  CVector out;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::band_apply(h, s.amplitudes, out);
    else kernels::band_apply_serial(h, s.amplitudes, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * (n + 1));
}

}  // namespace

BENCHMARK(husimi<false>)->Name("husimi/serial")->Arg(60)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(husimi<true>)->Name("husimi/openmp")->Arg(60)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(landscape<false>)->Name("landscape/serial")->Arg(181)->Arg(721)->Unit(benchmark::kMillisecond);
BENCHMARK(landscape<true>)->Name("landscape/openmp")->Arg(181)->Arg(721)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(band_apply<false>)->Name("band_apply/serial")->Arg(1000)->Arg(100000);
BENCHMARK(band_apply<true>)->Name("band_apply/openmp")->Arg(1000)->Arg(100000)->UseRealTime();

BENCHMARK_MAIN();
