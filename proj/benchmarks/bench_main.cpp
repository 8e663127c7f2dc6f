// Micro benchmarks for the pipeline stages on the registered models.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "linchk/bench.hpp"
#include "linchk/bisim.hpp"
#include "linchk/explorer.hpp"
#include "linchk/refine.hpp"

namespace {

using namespace linchk;

const char* const kNames[] = {"hw_queue", "treiber_stack", "ms_queue", "ms_two_lock_queue", "coarse_list"};

ClientConfig config_for(const Benchmark& b, int ops) {
  ClientConfig c = b.config;
  c.max_ops_per_thread = ops;
  return c;
}

void BM_Explore(benchmark::State& state) {
  const Benchmark& b = *find_benchmark(kNames[state.range(0)]);
  ClientConfig c = config_for(b, static_cast<int>(state.range(1)));
  ObjectModel m = load_benchmark_model(b, c);
  std::size_t states = 0;
  for (auto _ : state) {
    Lts l = explore(m, c);
    states = l.state_count();
    benchmark::DoNotOptimize(states);
  }
  state.SetLabel(b.name);
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_Explore)->ArgsProduct({{0, 1, 2, 3, 4}, {2}})->Unit(benchmark::kMillisecond);

void BM_BranchingPartition(benchmark::State& state) {
  const Benchmark& b = *find_benchmark(kNames[state.range(0)]);
  ClientConfig c = config_for(b, static_cast<int>(state.range(1)));
  Lts l = explore(load_benchmark_model(b, c), c);
  std::size_t blocks = 0;
  for (auto _ : state) {
    blocks = branching_partition(l).block_count();
    benchmark::DoNotOptimize(blocks);
  }
  state.SetLabel(b.name);
  state.counters["states"] = static_cast<double>(l.state_count());
  state.counters["blocks"] = static_cast<double>(blocks);
}
BENCHMARK(BM_BranchingPartition)
    ->ArgsProduct({{0, 1, 2, 3, 4}, {2}})
    ->Args({0, 3})
    ->Args({2, 3})
    ->Unit(benchmark::kMillisecond);

void BM_DivergencePartition(benchmark::State& state) {
  const Benchmark& b = *find_benchmark(kNames[state.range(0)]);
  ClientConfig c = config_for(b, 2);
  Lts l = explore(load_benchmark_model(b, c), c);
  for (auto _ : state) benchmark::DoNotOptimize(divergence_partition(l).block_count());
  state.SetLabel(b.name);
}
BENCHMARK(BM_DivergencePartition)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_CheckLinearizability(benchmark::State& state) {
  const Benchmark& b = *find_benchmark(kNames[state.range(0)]);
  ClientConfig c = config_for(b, 2);
  ObjectModel m = load_benchmark_model(b, c);
  for (auto _ : state) benchmark::DoNotOptimize(check_linearizability(m, c).pass);
  state.SetLabel(b.name);
}
BENCHMARK(BM_CheckLinearizability)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const Benchmark& b = *find_benchmark("hw_queue");
  ClientConfig c = config_for(b, 2);
  ObjectModel m = load_benchmark_model(b, c);
  Lts l = explore(m, c);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_linearizable(l, *m.seqspec).pass);
}
BENCHMARK(BM_BruteForce)->Unit(benchmark::kMillisecond);

// Naive fixpoint versus partition refinement on the same random systems.
Lts random_system(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> state(0, n - 1);
  std::uniform_int_distribution<int> label(0, 3);
  LtsBuilder b;
  b.ensure_states(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (int e = 0; e < 2; ++e) {
      int l = label(rng);
      LabelId id = l == 0 ? kTau : b.intern(ActionLabel::call(1, "m" + std::to_string(l), "VOID"));
      b.add(static_cast<StateId>(s), id, static_cast<StateId>(state(rng)));
    }
  }
  return std::move(b).build_unpruned(0);
}

void BM_RandomBranching(benchmark::State& state) {
  Lts l = random_system(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(branching_partition(l).block_count());
}
BENCHMARK(BM_RandomBranching)->RangeMultiplier(4)->Range(16, 16384);

void BM_RandomNaive(benchmark::State& state) {
  Lts l = random_system(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(naive_branching_relation(l).size());
}
BENCHMARK(BM_RandomNaive)->RangeMultiplier(2)->Range(16, 64);

}  // namespace
BENCHMARK_MAIN();
