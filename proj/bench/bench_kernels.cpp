// Serial reference kernels against their OpenMP counterparts.

#include "ecw/kernels.hpp"
#include "ecw/walk.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace ecw;

namespace {

// Args: q, g. Times the last lift only (level g-1 -> g).
template <typename Scalar, bool Parallel>
void BM_LiftTable(benchmark::State& state) {
  const GraphParams params{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  const auto graph = build_graph(params);
  BasicHittingTable<Scalar> previous;
  if constexpr (std::is_same_v<Scalar, Rational>)
    previous = hitting_table_exact({params.q, params.g - 1}, Execution::serial);
  else
    previous = hitting_table_float({params.q, params.g - 1}, Execution::serial);
  for (auto _ : state) {
    auto next = Parallel ? kernels::lift_table_parallel(previous, graph) : kernels::lift_table_serial(previous, graph);
    benchmark::DoNotOptimize(next.values.data());
  }
  state.counters["N"] = static_cast<double>(graph.node_count());
  state.counters["threads"] = Parallel ? omp_get_max_threads() : 1;
}

template <bool Parallel>
void BM_OracleExact(benchmark::State& state) {
  const auto graph = build_graph({static_cast<int>(state.range(0)), static_cast<int>(state.range(1))});
  for (auto _ : state) {
    auto t = Parallel ? kernels::oracle_table_exact_parallel(graph) : kernels::oracle_table_exact_serial(graph);
    benchmark::DoNotOptimize(t.values.data());
  }
  state.counters["N"] = static_cast<double>(graph.node_count());
}

template <bool Parallel>
void BM_OracleFloat(benchmark::State& state) {
  const auto graph = build_graph({static_cast<int>(state.range(0)), static_cast<int>(state.range(1))});
  for (auto _ : state) {
    auto t = Parallel ? kernels::oracle_table_float_parallel(graph) : kernels::oracle_table_float_serial(graph);
    benchmark::DoNotOptimize(t.values.data());
  }
  state.counters["N"] = static_cast<double>(graph.node_count());
}

}  // namespace

BENCHMARK(BM_LiftTable<Rational, false>)->Args({1, 5})->Args({2, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LiftTable<Rational, true>)->Args({1, 5})->Args({2, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LiftTable<double, false>)->Args({1, 6})->Args({2, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LiftTable<double, true>)->Args({1, 6})->Args({2, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleExact<false>)->Args({1, 3})->Args({2, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleExact<true>)->Args({1, 3})->Args({2, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleFloat<false>)->Args({1, 5})->Args({2, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleFloat<true>)->Args({1, 5})->Args({2, 3})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
