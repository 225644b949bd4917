#include <benchmark/benchmark.h>

#include "flawsim/flawsim.hpp"

using namespace flawsim;

namespace {

Instance triangle() {
  return std::get<Instance>(gen_coloring(3, {{0, 1}, {1, 2}, {2, 0}}, 3, kDefaultExplicitCap, Flavor::explicit_only));
}

void BM_StepExplicit(benchmark::State& state) {
  const Instance inst = attach_noise(triangle(), NoiseModel::greedy(), 0.2);
  RandomStream rng(1);
  StateId s = 0;
  for (auto _ : state) {
    const StepResult r = step(inst, s, rng);
    s = inst.is_flawed(r.next) ? r.next : 0;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_StepExplicit);

void BM_StepImplicitKsat(benchmark::State& state) {
  const auto g = gen_ksat(40, {{1, 2, 3}, {-3, 4, 5}, {-5, 6, -7}, {7, 8, 9}, {-9, -1, 10}});
  const ChainModel& m = as_model(g);
  RandomStream rng(2);
  StateId s = 0;
  for (auto _ : state) {
    const StepResult r = step(m, s, rng);
    s = m.is_flawed(r.next) ? r.next : 0;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_StepImplicitKsat);

void BM_MonteCarlo(benchmark::State& state) {
  const Instance inst = triangle();
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo(inst, trials, 7, 10'000, 1));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}
BENCHMARK(BM_MonteCarlo)->Arg(1'000)->Arg(10'000);

}  // namespace
