// Serial reference vs OpenMP kernels on grids around the dispatch threshold,
// plus one full energy-gradient evaluation through each path.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "pkirch/functional.hpp"
#include "pkirch/kernels.hpp"
#include "pkirch/params.hpp"
#include "pkirch/radial.hpp"

namespace {

using namespace pkirch;

struct Data {
  RadialGrid grid;
  std::vector<double> u;
  explicit Data(std::size_t n) : grid(40.0, n), u(grid.size()) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = grid.node(i);
      u[i] = (1.0 + 0.3 * r * r) * std::exp(-0.5 * r * r);
    }
  }
};

template <kernels::Exec E>
void BM_power_sum(benchmark::State& st) {
  const Data d(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::power_sum(d.grid.volume_weights(), d.u, 1.6, E));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <kernels::Exec E>
void BM_power_gradient(benchmark::State& st) {
  const Data d(static_cast<std::size_t>(st.range(0)));
  std::vector<double> out(d.u.size(), 0.0);
  for (auto _ : st) {
    kernels::add_power_gradient(d.grid.volume_weights(), d.u, 1.6, 1.0, 1e-8, out, E);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <kernels::Exec E>
void BM_energy_gradient(benchmark::State& st) {
  const Data d(static_cast<std::size_t>(st.range(0)));
  const Params prm = make_params(1.0, 1.0, 1.6, 2.6, 1.0);
  const DiscreteFunctional F(prm, d.grid, E);
  const ProfileNorms nm = F.norms(d.u);
  std::vector<double> out(d.u.size());
  for (auto _ : st) {
    F.energy_gradient(d.u, nm, 1.0, 1e-8, out);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

constexpr auto kSerial = kernels::Exec::Serial;
constexpr auto kParallel = kernels::Exec::Parallel;

BENCHMARK(BM_power_sum<kSerial>)->RangeMultiplier(4)->Range(4096, 1 << 20);
BENCHMARK(BM_power_sum<kParallel>)->RangeMultiplier(4)->Range(4096, 1 << 20);
BENCHMARK(BM_power_gradient<kSerial>)->RangeMultiplier(4)->Range(4096, 1 << 20);
BENCHMARK(BM_power_gradient<kParallel>)->RangeMultiplier(4)->Range(4096, 1 << 20);
BENCHMARK(BM_energy_gradient<kSerial>)->RangeMultiplier(4)->Range(4096, 1 << 20);
BENCHMARK(BM_energy_gradient<kParallel>)->RangeMultiplier(4)->Range(4096, 1 << 20);

}  // namespace

BENCHMARK_MAIN();
