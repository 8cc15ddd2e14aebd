// Parallel kernels against their serial references. On a single core the
// pairs should run at about the same speed; the difference is OpenMP
// overhead.

#include <benchmark/benchmark.h>

#include "hampack/hamilton.hpp"
#include "hampack/matching.hpp"
#include "hampack/params.hpp"
#include "hampack/pipelines.hpp"
#include "hampack/sampling.hpp"

using namespace hampack;

static void BM_PermanentRyser(benchmark::State& state) {
  const auto g = sample_bipartite(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 0.6, 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_pms(g));
}
BENCHMARK(BM_PermanentRyser)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_PermanentRyserSerial(benchmark::State& state) {
  const auto g = sample_bipartite(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 0.6, 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_pms_reference(g));
}
BENCHMARK(BM_PermanentRyserSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_HamiltonCount(benchmark::State& state) {
  const auto d = sample_dnp(static_cast<int>(state.range(0)), 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_hamilton_exact(d));
}
BENCHMARK(BM_HamiltonCount)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);

static void BM_HamiltonCountSerial(benchmark::State& state) {
  const auto d = sample_dnp(static_cast<int>(state.range(0)), 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_hamilton_reference(d));
}
BENCHMARK(BM_HamiltonCountSerial)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);

// range(0) = worker threads; 1 runs the serial loop over subdigraphs.
static void BM_PackLoop(benchmark::State& state) {
  const auto d = sample_dnp(400, 0.4, 1);
  const auto params = parameter_policy(400, 0.4, Task::Pack);
  RunOptions opt;
  opt.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pack(d, params, 1, opt).achieved());
}
BENCHMARK(BM_PackLoop)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
