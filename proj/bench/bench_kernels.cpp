// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Serial reference vs OpenMP contraction kernels. Arguments are (n, d_B) with
// d_A = d_B.

#include "qpureb/dicke.hpp"
#include "qpureb/kernels.hpp"
#include "qpureb/pureb_params.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace qpureb;

struct Fixture {
  BTensor bt;
  int d_a;
  std::vector<Complex> p;
  ComplexMatrix m;

  Fixture(int n, int d) : bt(n, d), d_a(d), p(PurebParams::random(d, d, n, 1).normalized()) {
    const int D = d * d;
    m = ComplexMatrix::Random(D, D);
    m = (m + m.adjoint()).eval();
  }
};

template <auto Kernel>
void BM_marginal(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  ComplexMatrix sigma;
  for (auto _ : state) {
    Kernel(f.bt, f.d_a, f.p, sigma);
    benchmark::DoNotOptimize(sigma.data());
  }
}

template <auto Kernel>
void BM_pullback(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::vector<Complex> grad(f.p.size());
  for (auto _ : state) {
    std::fill(grad.begin(), grad.end(), Complex(0.0));
    Kernel(f.bt, f.d_a, f.p, f.m, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({64, 2})->Args({1024, 2})->Args({16, 3})->Args({48, 3})->Args({12, 4});
}

BENCHMARK(BM_marginal<kernels::marginal_serial>)->Apply(sizes);
BENCHMARK(BM_marginal<kernels::marginal_omp>)->Apply(sizes);
BENCHMARK(BM_pullback<kernels::pullback_serial>)->Apply(sizes);
BENCHMARK(BM_pullback<kernels::pullback_omp>)->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
