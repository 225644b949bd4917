#include <benchmark/benchmark.h>

#include "flawsim/flawsim.hpp"

using namespace flawsim;

namespace {

Instance random_instance(std::uint64_t states) {
  RandomSpec spec;
  spec.states = states;
  spec.flaws = 8;
  spec.density = 0.1;
  spec.max_support = 8;
  spec.noise_support = 3;
  spec.p = 0.1;
  return gen_random(spec, 42);
}

void BM_FlawProfiles(benchmark::State& state) {
  const Instance inst = random_instance(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(flaw_profiles(inst));
}
BENCHMARK(BM_FlawProfiles)->Arg(256)->Arg(4096)->Arg(65536);

void BM_Certify(benchmark::State& state) {
  const Analysis a = flaw_profiles(attach_noise(gen_star(8), NoiseModel::point(0), 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(certify(a));
}
BENCHMARK(BM_Certify);

void BM_InequalityAudit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(inequality_audit());
}
BENCHMARK(BM_InequalityAudit)->Unit(benchmark::kMillisecond);

void BM_TruncatedTree(benchmark::State& state) {
  const Instance inst =
      std::get<Instance>(gen_coloring(3, {{0, 1}, {1, 2}, {2, 0}}, 3, kDefaultExplicitCap, Flavor::explicit_only));
  const auto x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bad_mass(truncated_tree(inst, x)));
}
BENCHMARK(BM_TruncatedTree)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

}  // namespace
