#include <benchmark/benchmark.h>

#include "flawsim/flawsim.hpp"

using namespace flawsim;

namespace {

Trajectory long_run(const Instance& inst) {
  for (std::uint64_t seed = 0;; ++seed) {
    Trajectory t = run(inst, seed, {});
    if (t.z >= 20) return t;
  }
}

Instance noisy_triangle() {
  return attach_noise(
      std::get<Instance>(gen_coloring(3, {{0, 1}, {1, 2}, {2, 0}}, 3, kDefaultExplicitCap, Flavor::explicit_only)),
      NoiseModel::greedy(), 0.3);
}

void BM_BreakSets(benchmark::State& state) {
  const Instance inst = noisy_triangle();
  const Trajectory t = long_run(inst);
  for (auto _ : state) benchmark::DoNotOptimize(break_sets(inst, t));
}
BENCHMARK(BM_BreakSets);

void BM_EncodeDecode(benchmark::State& state) {
  const Instance inst = noisy_triangle();
  const BreakSequence bs = break_sets(inst, long_run(inst));
  for (auto _ : state) benchmark::DoNotOptimize(decode(encode(bs.b_star[0], bs.lengths), inst.flaw_count()));
}
BENCHMARK(BM_EncodeDecode);

void BM_Reconstruct(benchmark::State& state) {
  const Instance inst = noisy_triangle();
  const BreakSequence bs = break_sets(inst, long_run(inst));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_witness(bs.b_star, inst.priority()));
}
BENCHMARK(BM_Reconstruct);

}  // namespace
