// Serial against OpenMP minor enumeration and batched zero computation.
// Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include <random>

#include "zerolab/polymat.h"
#include "zerolab/zeros.h"

namespace {

using namespace zerolab;

StateSpace random_system(std::mt19937_64& rng, int n, int r, int l) {
  std::uniform_int_distribution<int> d(-3, 3);
  QMat A(n, n), B(n, r), C(l, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = d(rng);
    for (int j = 0; j < r; ++j) B(i, j) = d(rng);
    for (int j = 0; j < l; ++j) C(j, i) = d(rng);
  }
  return StateSpace(A, B, C);
}

// System matrix of an n-state, 2-input, 3-output system; minors of order n + 2
// (n <= 6 keeps them under the enumeration limit).
PMat pencil(int n) {
  std::mt19937_64 rng(7);
  return system_matrix(random_system(rng, n, 2, 3));
}

std::vector<StateSpace> batch(int count) {
  std::mt19937_64 rng(11);
  std::vector<StateSpace> out;
  for (int i = 0; i < count; ++i) out.push_back(random_system(rng, 5, 2, 2));
  return out;
}

void BM_MinorGcdSerial(benchmark::State& st) {
  PMat p = pencil(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(minor_gcd_serial(p, p.cols()));
}
void BM_MinorGcdParallel(benchmark::State& st) {
  PMat p = pencil(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(minor_gcd(p, p.cols()));
}
BENCHMARK(BM_MinorGcdSerial)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinorGcdParallel)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_BatchZerosSerial(benchmark::State& st) {
  auto systems = batch(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(batch_system_zeros_serial(systems));
}
void BM_BatchZerosParallel(benchmark::State& st) {
  auto systems = batch(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(batch_system_zeros(systems));
}
BENCHMARK(BM_BatchZerosSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchZerosParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
