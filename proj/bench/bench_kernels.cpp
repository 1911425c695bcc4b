// Serial reference against OpenMP version for each kernel.

#include <random>

#include <benchmark/benchmark.h>

#include "symjunta/boolfn.hpp"
#include "symjunta/kernels.hpp"

using namespace symjunta;

namespace {

std::vector<std::int64_t> random_table(int k) {
  std::mt19937_64 gen(1);
  std::vector<std::int64_t> t(std::size_t{1} << k);
  for (auto& v : t) v = gen() & 1;
  return t;
}

template <void (*Transform)(std::span<std::int64_t>)>
void BM_WalshHadamard(benchmark::State& state) {
  const auto input = random_table(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto data = input;
    Transform(data);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
}

template <kernels::MinOrderTally (*Tally)(const LevelTable&, int, kernels::IndexRange)>
void BM_Tally(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const LevelTable table(k);
  const kernels::IndexRange all{0, std::uint64_t{2} << k};
  for (auto _ : state) benchmark::DoNotOptimize(Tally(table, 2 * k / 3, all));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(all.end));
}

kernels::ExampleMatrix random_examples(int n, std::size_t m) {
  std::mt19937_64 gen(2);
  kernels::ExampleMatrix mat(n, m);
  for (std::size_t e = 0; e < m; ++e) {
    for (int i = 0; i < n; ++i) mat.set(e, i, gen() & 1);
    mat.set_label(e, gen() & 1);
  }
  return mat;
}

template <std::vector<std::int64_t> (*Sums)(const kernels::ExampleMatrix&, std::span<const int>, int)>
void BM_LevelSums(benchmark::State& state) {
  const int n = 32;
  const auto mat = random_examples(n, static_cast<std::size_t>(state.range(0)));
  std::vector<int> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.insert(pairs.end(), {a, b});
  }
  for (auto _ : state) benchmark::DoNotOptimize(Sums(mat, pairs, 2));
}

template <std::vector<std::uint64_t> (*Sieve)(std::uint64_t, std::uint64_t)>
void BM_Sieve(benchmark::State& state) {
  const auto hi = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Sieve(2, hi));
}

}  // namespace

BENCHMARK(BM_WalshHadamard<kernels::walsh_hadamard_serial>)->Name("wht/serial")->Arg(16)->Arg(20);
BENCHMARK(BM_WalshHadamard<kernels::walsh_hadamard_parallel>)->Name("wht/parallel")->Arg(16)->Arg(20);
BENCHMARK(BM_Tally<kernels::tally_min_orders_serial>)->Name("tally/serial")->Arg(16)->Arg(20);
BENCHMARK(BM_Tally<kernels::tally_min_orders_parallel>)->Name("tally/parallel")->Arg(16)->Arg(20);
BENCHMARK(BM_LevelSums<kernels::level_sums_serial>)->Name("level_sums/serial")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_LevelSums<kernels::level_sums_parallel>)->Name("level_sums/parallel")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_Sieve<kernels::sieve_serial>)->Name("sieve/serial")->Arg(1'000'000)->Arg(10'000'000);
BENCHMARK(BM_Sieve<kernels::sieve_parallel>)->Name("sieve/parallel")->Arg(1'000'000)->Arg(10'000'000);

BENCHMARK_MAIN();
