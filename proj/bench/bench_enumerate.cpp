// Parallel (OpenMP subtree split) versus serial path walking.
// Set OMP_NUM_THREADS to vary the worker count.

#include <benchmark/benchmark.h>

#include "rcdose/path_explorer.hpp"

namespace {

using namespace rcdose;

ProtocolConfig rolling() {
  ProtocolConfig c;
  c.cohort_sizes = {3, 2, 1};
  return c;
}

void BM_CountParallel(benchmark::State& state) {
  const int doses = static_cast<int>(state.range(0));
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(n = count_paths(doses));
  state.counters["paths"] = static_cast<double>(n);
  state.counters["paths/s"] = benchmark::Counter(static_cast<double>(n) * state.iterations(),
                                                 benchmark::Counter::kIsRate);
}

void BM_CountSerial(benchmark::State& state) {
  const int doses = static_cast<int>(state.range(0));
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(n = count_paths_serial(doses));
  state.counters["paths"] = static_cast<double>(n);
  state.counters["paths/s"] = benchmark::Counter(static_cast<double>(n) * state.iterations(),
                                                 benchmark::Counter::kIsRate);
}

void BM_EnumerateParallel(benchmark::State& state) {
  const auto init = initial_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_paths(init));
}

void BM_EnumerateSerial(benchmark::State& state) {
  const auto init = initial_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_paths_serial(init));
}

void BM_RollingCountParallel(benchmark::State& state) {
  const ProtocolConfig c = rolling();
  for (auto _ : state) benchmark::DoNotOptimize(count_paths(static_cast<int>(state.range(0)), c));
}

void BM_RollingCountSerial(benchmark::State& state) {
  const ProtocolConfig c = rolling();
  for (auto _ : state)
    benchmark::DoNotOptimize(count_paths_serial(static_cast<int>(state.range(0)), c));
}

}  // namespace

BENCHMARK(BM_CountParallel)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountSerial)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->DenseRange(4, 6, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSerial)->DenseRange(4, 6, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RollingCountParallel)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RollingCountSerial)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
