#include <benchmark/benchmark.h>

#include "randsvm/dataset.hpp"
#include "randsvm/kernels.hpp"
#include "randsvm/smo.hpp"
#include "randsvm/train.hpp"

using namespace randsvm;

static void BM_GaussianEval(benchmark::State& state) {
  auto ds = gen_twonorm(2, 1);
  KernelSpec g{KernelFamily::gaussian, 3.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        k_eval(g, ds.examples[0].x, ds.examples[1].x));
}
BENCHMARK(BM_GaussianEval);

static void BM_SmoSolve(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto ds = gen_twonorm(n, 7);
  std::vector<std::size_t> working(n);
  for (std::size_t i = 0; i < n; ++i) working[i] = i;
  KernelSpec g{KernelFamily::gaussian, 3.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_csvc(ds, working, g, 1.0, std::nullopt));
}
BENCHMARK(BM_SmoSolve)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_WeightedSample(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + (i % 7);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(weighted_sample(w, n / 10, seed++));
}
BENCHMARK(BM_WeightedSample)->Arg(10000)->Arg(100000);

static void BM_ViolatorScan(benchmark::State& state) {
  const std::size_t n = 50000;
  auto ds = gen_twonorm(n, 13);
  KernelSpec g{KernelFamily::gaussian, 3.0};
  std::vector<std::size_t> sub(200);
  for (std::size_t i = 0; i < 200; ++i) sub[i] = i;
  auto out = solve_csvc(ds, sub, g, 1.0, std::nullopt);
  const std::size_t p = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(scan_violators(out.model, ds, sub, 1e-3, p));
}
BENCHMARK(BM_ViolatorScan)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
