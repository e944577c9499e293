// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "xlmap/kernels.hpp"

using namespace xlmap;
using kernels::Exec;

namespace {

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DenseMatrix m(rows, cols);
  for (std::size_t k = 0; k < m.size(); ++k) m.data()[k] = g(rng);
  return m;
}

kernels::Ibm1Lattice random_lattice(std::size_t sentences, std::size_t params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> len(5, 15);
  std::uniform_int_distribution<std::uint32_t> param(0, static_cast<std::uint32_t>(params - 1));
  kernels::Ibm1Lattice lattice;
  for (std::size_t s = 0; s < sentences; ++s) {
    const auto i = len(rng), j = len(rng);
    lattice.src_len.push_back(i);
    lattice.tgt_len.push_back(j);
    for (std::uint32_t c = 0; c < j * (i + 1); ++c) {
      lattice.param.push_back(param(rng));
      lattice.prior.push_back(1.0 / (i + 1));
    }
    lattice.offsets.push_back(lattice.param.size());
  }
  return lattice;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_CrossGram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto y = random_matrix(64, n, 1), x = random_matrix(64, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cross_gram(y, x, exec_of(state)));
}

void BM_Multiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(64, 64, 3), b = random_matrix(64, n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply(a, b, exec_of(state)));
}

void BM_CosineTopK(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = random_matrix(64, n, 5), k = random_matrix(64, n, 6);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cosine_top_k(q, k, 10, exec_of(state)));
}

void BM_Ibm1Expectation(benchmark::State& state) {
  const std::size_t params = 50'000;
  const auto lattice = random_lattice(static_cast<std::size_t>(state.range(0)), params, 7);
  std::vector<double> t(params, 1.0 / params), counts(params);
  for (auto _ : state) {
    std::ranges::fill(counts, 0.0);
    benchmark::DoNotOptimize(kernels::ibm1_expectation(lattice, t, counts, exec_of(state)));
  }
}

}  // namespace

BENCHMARK(BM_CrossGram)->ArgsProduct({{10'000, 100'000}, {0, 1}})->ArgNames({"n", "omp"});
BENCHMARK(BM_Multiply)->ArgsProduct({{10'000, 100'000}, {0, 1}})->ArgNames({"n", "omp"});
BENCHMARK(BM_CosineTopK)->ArgsProduct({{1'000, 4'000}, {0, 1}})->ArgNames({"n", "omp"});
BENCHMARK(BM_Ibm1Expectation)->ArgsProduct({{2'000, 20'000}, {0, 1}})->ArgNames({"sentences", "omp"});

BENCHMARK_MAIN();
