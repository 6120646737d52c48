#include <benchmark/benchmark.h>

#include "nsac/diagnostics.hpp"
#include "nsac/scheme.hpp"

namespace {

nsac::Scheme make(int n) { return nsac::Scheme(nsac::Discretization(nsac::Mesh::uniform_torus(n, 2)), nsac::Params{}); }

void BM_Residual(benchmark::State& st) {
  const nsac::Scheme s = make(static_cast<int>(st.range(0)));
  const nsac::State prev = s.initial_state(nsac::preset("phase_blob"));
  const Eigen::VectorXd x = s.pack(prev);
  for (auto _ : st) benchmark::DoNotOptimize(s.assemble(x, prev, s.dt(), 1.0, false));
  st.counters["unknowns"] = s.num_unknowns();
}
BENCHMARK(BM_Residual)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ResidualAndJacobian(benchmark::State& st) {
  const nsac::Scheme s = make(static_cast<int>(st.range(0)));
  const nsac::State prev = s.initial_state(nsac::preset("phase_blob"));
  const Eigen::VectorXd x = s.pack(prev);
  for (auto _ : st) benchmark::DoNotOptimize(s.assemble(x, prev, s.dt(), 1.0, true));
}
BENCHMARK(BM_ResidualAndJacobian)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& st) {
  const nsac::Scheme s = make(static_cast<int>(st.range(0)));
  const nsac::State prev = s.initial_state(nsac::preset("shear"));
  int iterations = 0;
  for (auto _ : st) {
    const nsac::StepResult r = s.step(prev, s.dt());
    iterations = r.newton_iterations;
  }
  st.counters["newton"] = iterations;
}
BENCHMARK(BM_Step)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_EnergyReport(benchmark::State& st) {
  const nsac::Scheme s = make(static_cast<int>(st.range(0)));
  const nsac::State prev = s.initial_state(nsac::preset("shear"));
  const nsac::State next = s.step(prev, s.dt()).state;
  for (auto _ : st) benchmark::DoNotOptimize(nsac::energy_report(s, next, prev));
}
BENCHMARK(BM_EnergyReport)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
