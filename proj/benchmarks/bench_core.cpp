#include <benchmark/benchmark.h>

#include "nsk/fft.hpp"
#include "nsk/integrator.hpp"
#include "nsk/nonlinear.hpp"
#include "nsk/spectral.hpp"

namespace {

using namespace nsk;

NonlinearScenario scenario(std::size_t n) {
  NonlinearScenario s{make_params(1, 0, 1, 1, critical_quadratic(1, 1)), Grid(3, n, static_cast<double>(n))};
  s.amplitude = 0.02;
  s.seed = 7;
  s.density_width = 0.15;
  s.tensor_width = 0.15;
  return s;
}

void BM_ForwardTransform(benchmark::State& st) {
  const auto s = scenario(static_cast<std::size_t>(st.range(0)));
  const State u = initial_data(s);
  for (auto _ : st) benchmark::DoNotOptimize(forward_transform(u.m));
}
BENCHMARK(BM_ForwardTransform)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ApplySemigroup(benchmark::State& st) {
  const auto s = scenario(static_cast<std::size_t>(st.range(0)));
  const SpectralState u = to_spectral(initial_data(s));
  for (auto _ : st) benchmark::DoNotOptimize(apply_semigroup(u, s.params, 1.0));
}
BENCHMARK(BM_ApplySemigroup)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Nonlinearity(benchmark::State& st) {
  const auto s = scenario(static_cast<std::size_t>(st.range(0)));
  const SpectralState u = to_spectral(initial_data(s));
  for (auto _ : st) benchmark::DoNotOptimize(nonlinearity_g_hat(u, s.params));
}
BENCHMARK(BM_Nonlinearity)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Etdrk2Step(benchmark::State& st) {
  const auto s = scenario(static_cast<std::size_t>(st.range(0)));
  const SpectralState u = to_spectral(initial_data(s));
  const Etdrk2 stepper(s.params, s.grid, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(stepper.step(u));
}
BENCHMARK(BM_Etdrk2Step)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
