#include <benchmark/benchmark.h>

#include <string>

#include "spovm/codes.hpp"
#include "spovm/json_io.hpp"
#include "spovm/lab.hpp"
#include "spovm/protocol.hpp"
#include "spovm/random.hpp"
#include "spovm/rates.hpp"

namespace spovm {
namespace {

DistributedProblem example(int id) {
  return problem_from_json(read_json_file(std::string(SPOVM_DATA_DIR) + "/example" +
                                          std::to_string(id) + ".json"));
}

void BM_TraceNorm(benchmark::State& state) {
  Rng rng(1);
  const auto d = static_cast<int>(state.range(0));
  const Matrix a = hermitian_part(ginibre(rng, d, d));
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(a));
}
BENCHMARK(BM_TraceNorm)->RangeMultiplier(2)->Range(4, 64);

void BM_PartialTrace(benchmark::State& state) {
  Rng rng(2);
  const auto q = static_cast<int>(state.range(0));
  const std::vector<int> dims(q, 2);
  const std::vector<int> traced{0};
  const Matrix rho = random_density(rng, 1 << q, 2);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, dims, traced));
}
BENCHMARK(BM_PartialTrace)->DenseRange(2, 8, 2);

void BM_DistributedQuantities(benchmark::State& state) {
  const DistributedProblem problem = example(1);
  for (auto _ : state) benchmark::DoNotOptimize(distributed_quantities(problem));
}
BENCHMARK(BM_DistributedQuantities);

void BM_EliminateRtilde(benchmark::State& state) {
  const RateRegion r3 = r3_region(distributed_quantities(example(1)));
  for (auto _ : state) benchmark::DoNotOptimize(fourier_motzkin_eliminate(r3, "Rtilde"));
}
BENCHMARK(BM_EliminateRtilde);

void BM_SampleEnsemble(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_ensemble({3, n, 1, 1, 4, seed++}));
}
BENCHMARK(BM_SampleEnsemble)->DenseRange(2, 6, 2);

void BM_PairwiseCheck(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_independence_check(2, 3, 1, 1));
}
BENCHMARK(BM_PairwiseCheck);

void BM_BuildP2pInstance(benchmark::State& state) {
  const P2pProblem problem = trine_problem();
  ProtocolParams params;
  params.n = static_cast<int>(state.range(0));
  params.k = 0;
  params.l = 2 * params.n;
  params.p = problem.p;
  params.N = 2;
  params.delta = 0.9;
  for (auto _ : state) {
    params.seed++;
    benchmark::DoNotOptimize(build_instance(params, problem.m, problem.rho));
  }
}
BENCHMARK(BM_BuildP2pInstance)->DenseRange(2, 4, 1)->Unit(benchmark::kMillisecond);

void BM_Covering(benchmark::State& state) {
  const CoveringInstance inst = qubit_covering_instance(6, 0.05, 1);
  for (auto _ : state) benchmark::DoNotOptimize(covering_experiment(inst, {}, 16, 20, 3));
}
BENCHMARK(BM_Covering)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace spovm

BENCHMARK_MAIN();
