// Benchmark: serial vs OpenMP Bellman sweep on a frozen planner graph.

#include <benchmark/benchmark.h>

#include <random>

#include "ipolicy/scenario.hpp"
#include "ipolicy/value_iteration.hpp"

namespace {

ipolicy::FrozenGraph make_graph(int samples) {
  using namespace ipolicy;
  Scenario sc = build_scenario(preset("pointmass_fig2"));
  SampleGraph graph = sc.make_graph();
  std::mt19937_64 rng(12345);
  graph.add_sample(sc.env->goal().center, 0);
  while (graph.size() < static_cast<std::size_t>(samples)) {
    graph.add_sample(graph.sample_free(rng), 0);
  }
  return freeze(graph);
}

void bench_sweep_serial(benchmark::State& state) {
  const auto g = make_graph(static_cast<int>(state.range(0)));
  std::vector<double> in(g.size(), 1.0), out(g.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(ipolicy::bellman_sweep_serial(g, in, out));
    benchmark::ClobberMemory();
  }
}

void bench_sweep_parallel(benchmark::State& state) {
  const auto g = make_graph(static_cast<int>(state.range(0)));
  std::vector<double> in(g.size(), 1.0), out(g.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(ipolicy::bellman_sweep_parallel(g, in, out));
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(bench_sweep_serial)->Arg(1000)->Arg(4000)->Arg(16000);
BENCHMARK(bench_sweep_parallel)->Arg(1000)->Arg(4000)->Arg(16000);

BENCHMARK_MAIN();
