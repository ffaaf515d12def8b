// Serial reference vs OpenMP kernels. Each benchmark takes the Exec mode as
// its first argument (0 = serial, 1 = parallel).
#include "hplab/asymptotics.hpp"
#include "hplab/ode.hpp"
#include "hplab/potential.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hplab;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) ? "parallel" : "serial"); }

void BM_Bareiss(benchmark::State& st) {
  const int n = static_cast<int>(st.range(1));
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> d(-50, 50);
  std::vector<std::vector<Rational>> rows(static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(n + 1)));
  for (auto& r : rows)
    for (auto& v : r) v = Rational(d(rng), 1 + std::abs(d(rng)));
  const IntMatrix base = integer_rows(rows, n + 1);
  for (auto _ : st) {
    IntMatrix m = base;
    benchmark::DoNotOptimize(bareiss_echelon(m, mode(st)));
  }
  label(st);
}
BENCHMARK(BM_Bareiss)->ArgsProduct({{0, 1}, {40, 80}})->Unit(benchmark::kMillisecond);

void BM_HpSweep(benchmark::State& st) {
  const auto f = two_point_function(Rational(1, 3));
  const std::vector<int> ns{4, 8, 12, 16};
  for (auto _ : st) benchmark::DoNotOptimize(hp_sweep(f, 2, ns, mode(st)));
  label(st);
}
BENCHMARK(BM_HpSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Aberth(benchmark::State& st) {
  const auto sol = hp_solve(two_point_function(Rational(1, 3)), 2, static_cast<int>(st.range(1)));
  RootOptions opt;
  opt.exec = mode(st);
  for (auto _ : st) benchmark::DoNotOptimize(roots(sol.Q[2], 256, opt));
  label(st);
}
BENCHMARK(BM_Aberth)->ArgsProduct({{0, 1}, {20, 40}})->Unit(benchmark::kMillisecond);

void BM_RhoGrid(benchmark::State& st) {
  const Rational a(1, 3);
  const auto sol = hp_solve(two_point_function(a), 2, 20);
  const auto grid = clustered_grid(400);
  for (auto _ : st) benchmark::DoNotOptimize(rho_form(sol, a, grid, mode(st)));
  label(st);
}
BENCHMARK(BM_RhoGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Accessory(benchmark::State& st) {
  const CFn f({make_complex(-1, 0), make_complex(1, 0), make_complex(0, 0.5)},
              {make_complex(0.25, 0), make_complex(0.25, 0), make_complex(-0.5, 0)});
  for (auto _ : st) benchmark::DoNotOptimize(accessory_track(f, {5, 10, 20}, mode(st)));
  label(st);
}
BENCHMARK(BM_Accessory)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Equilibrium(benchmark::State& st) {
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(-0.95 + 0.1 * i);
  for (auto _ : st) benchmark::DoNotOptimize(equilibrium_check(Equilibrium::Eq1, grid, 32, mode(st)));
  label(st);
}
BENCHMARK(BM_Equilibrium)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
