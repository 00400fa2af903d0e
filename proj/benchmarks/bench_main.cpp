#include <benchmark/benchmark.h>

#include "partmetrics/expectation.hpp"
#include "partmetrics/sweep.hpp"

using namespace partmetrics;

namespace {

Partition random_partition(std::size_t n, std::uint64_t stream) {
  return sample_partition(Ensemble::all(n), Seed{42, stream});
}

void BM_mutual_information(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  Partition c = random_partition(n, 1);
  Partition t = random_partition(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mutual_information(contingency(c, t)));
  }
}
BENCHMARK(BM_mutual_information)->Arg(100)->Arg(1000);

void BM_sample_all(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  count_table().ensure(n);
  const Ensemble ens = Ensemble::all(n);
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_partition(ens, Seed{7, i++}));
  }
}
BENCHMARK(BM_sample_all)->Arg(50)->Arg(100)->Arg(200);

void BM_expected_mi_perm_exact(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  Shape sc = random_partition(n, 3).shape();
  Shape st = random_partition(n, 4).shape();
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_mi_perm_exact(sc, st));
  }
}
BENCHMARK(BM_expected_mi_perm_exact)->Arg(50)->Arg(200);

void BM_expected_mi_mc(benchmark::State& state) {
  const std::size_t n = 100;
  Partition t = balanced_partition(n, 10);
  const Ensemble ens = Ensemble::all(n);
  count_table().ensure(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        expected_mi_mc(t, ens, std::size_t(state.range(0)), Seed{3, 0}));
  }
}
BENCHMARK(BM_expected_mi_mc)->Arg(1000)->Arg(10000);

void BM_enumerate_all(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  for (auto _ : state) {
    std::size_t count = 0;
    for_each_partition(n, EnumRestriction::all(), [&](const Partition&) {
      ++count;
      return true;
    });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_enumerate_all)->Arg(8)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
