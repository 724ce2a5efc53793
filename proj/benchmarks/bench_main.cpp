#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nrgate/analysis.hpp"
#include "nrgate/kernel.hpp"
#include "nrgate/mlp.hpp"
#include "nrgate/simulator.hpp"
#include "nrgate/surrogate.hpp"

using namespace nrgate;

static void BM_Rhs(benchmark::State& state) {
  WaveguideConfig c = presets::system3();
  c.n_per_side = static_cast<std::size_t>(state.range(0));
  LatticeState s(c.n_per_side);
  for (std::size_t i = 0; i < s.raw().size(); ++i) s.raw()[i] = 1e-3 * static_cast<double>(i % 17);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(s, c, Direction::LR, 1.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.oscillators()));
}
BENCHMARK(BM_Rhs)->Arg(60)->Arg(200);

static void BM_Integrate(benchmark::State& state) {
  WaveguideConfig c = presets::system3();
  c.n_per_side = static_cast<std::size_t>(state.range(0));
  c.t_total = 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(c, Direction::LR));
  state.SetItemsProcessed(state.iterations() * 5000);  // steps
}
BENCHMARK(BM_Integrate)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Spectrum(benchmark::State& state) {
  std::vector<double> tau, x;
  for (int i = 0; i <= 15000; ++i) {
    tau.push_back(0.1 * i);
    x.push_back(std::cos(1.2 * 0.1 * i));
  }
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(tau, x, 1.2));
}
BENCHMARK(BM_Spectrum);

static void BM_SurrogateForward(benchmark::State& state) {
  const Mlp net = Mlp::random(default_architecture(), 1);
  const std::vector<double> in{0.1, -0.4, 0.7, 0.2, -0.9};
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(in));
}
BENCHMARK(BM_SurrogateForward);

static void BM_LargestSquare(benchmark::State& state) {
  BoolGrid g(61, 61);
  for (std::size_t r = 0; r < 61; ++r)
    for (std::size_t c = 0; c < 61; ++c) g.set(r, c, (r * 7 + c * 3) % 11 != 0);
  for (auto _ : state) benchmark::DoNotOptimize(largest_square_cells(g));
}
BENCHMARK(BM_LargestSquare);
BENCHMARK_MAIN();
