// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/kernels.hpp"

#include "qpureb/errors.hpp"

#include <omp.h>

#include <vector>

namespace qpureb::kernels {
namespace {

void check_shapes(const BTensor& bt, int d_a, std::span<const Complex> p) {
  if (d_a < 1 || p.size() != static_cast<std::size_t>(d_a) * bt.basis().size()) {
    throw ArgumentError("kernels: coefficient count does not match d_A * dim(Sym_n)");
  }
}

// Column m of C.
inline void gather_column(const BTensor& bt, int d_a, std::span<const Complex> p, std::size_t m,
                          Complex* col) {
  const int d = bt.d();
  const std::size_t dim = bt.basis().size();
  for (int i = 0; i < d; ++i) {
    const std::size_t k = bt.raised_position(m, i);
    const double c = bt.raise_coefficient(m, i);
    for (int a = 0; a < d_a; ++a) col[a * d + i] = c * p[a * dim + k];
  }
}

inline void rank_one_update(const Complex* col, int n, Complex* acc) {
  for (int r = 0; r < n; ++r) {
    const Complex cr = col[r];
    for (int c = 0; c < n; ++c) acc[r * n + c] += cr * std::conj(col[c]);
  }
}

std::size_t work_estimate(const BTensor& bt, int d_a) {
  const std::size_t dd = static_cast<std::size_t>(d_a) * bt.d();
  return bt.lowered_basis().size() * dd * dd;
}

}  // namespace

void marginal_serial(const BTensor& bt, int d_a, std::span<const Complex> p, ComplexMatrix& sigma) {
  check_shapes(bt, d_a, p);
  const int n = d_a * bt.d();
  std::vector<Complex> acc(static_cast<std::size_t>(n) * n, Complex(0.0));
  std::vector<Complex> col(n);
  const std::size_t lower = bt.lowered_basis().size();
  for (std::size_t m = 0; m < lower; ++m) {
    gather_column(bt, d_a, p, m, col.data());
    rank_one_update(col.data(), n, acc.data());
  }
  sigma.resize(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) sigma(r, c) = acc[r * n + c];
}

void marginal_omp(const BTensor& bt, int d_a, std::span<const Complex> p, ComplexMatrix& sigma) {
  check_shapes(bt, d_a, p);
  const int n = d_a * bt.d();
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const auto lower = static_cast<std::ptrdiff_t>(bt.lowered_basis().size());
  std::vector<Complex> total(nn, Complex(0.0));
#pragma omp parallel
  {
    std::vector<Complex> acc(nn, Complex(0.0));
    std::vector<Complex> col(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t m = 0; m < lower; ++m) {
      gather_column(bt, d_a, p, static_cast<std::size_t>(m), col.data());
      rank_one_update(col.data(), n, acc.data());
    }
#pragma omp critical(qpureb_marginal_reduce)
    for (std::size_t e = 0; e < nn; ++e) total[e] += acc[e];
  }
  sigma.resize(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) sigma(r, c) = total[r * n + c];
}

void marginal(const BTensor& bt, int d_a, std::span<const Complex> p, ComplexMatrix& sigma) {
  if (work_estimate(bt, d_a) >= kParallelWorkThreshold && omp_get_max_threads() > 1 && !omp_in_parallel()) {
    marginal_omp(bt, d_a, p, sigma);
  } else {
    marginal_serial(bt, d_a, p, sigma);
  }
}

void pullback_serial(const BTensor& bt, int d_a, std::span<const Complex> p, const ComplexMatrix& m,
                     std::span<Complex> grad) {
  check_shapes(bt, d_a, p);
  if (grad.size() != p.size()) throw ArgumentError("pullback: gradient size mismatch");
  const int d = bt.d();
  const int n = d_a * d;
  if (m.rows() != n || m.cols() != n) throw ArgumentError("pullback: sensitivity shape mismatch");
  const std::size_t dim = bt.basis().size();
  const std::size_t lower = bt.lowered_basis().size();
  std::vector<Complex> col(n), g(n);
  for (std::size_t l = 0; l < lower; ++l) {
    gather_column(bt, d_a, p, l, col.data());
    for (int r = 0; r < n; ++r) {
      Complex s(0.0);
      for (int c = 0; c < n; ++c) s += m(r, c) * col[c];
      g[r] = 2.0 * s;
    }
    for (int i = 0; i < d; ++i) {
      const std::size_t k = bt.raised_position(l, i);
      const double c = bt.raise_coefficient(l, i);
      for (int a = 0; a < d_a; ++a) grad[a * dim + k] += c * g[a * d + i];
    }
  }
}

void pullback_omp(const BTensor& bt, int d_a, std::span<const Complex> p, const ComplexMatrix& m,
                  std::span<Complex> grad) {
  check_shapes(bt, d_a, p);
  if (grad.size() != p.size()) throw ArgumentError("pullback: gradient size mismatch");
  const int d = bt.d();
  const int n = d_a * d;
  if (m.rows() != n || m.cols() != n) throw ArgumentError("pullback: sensitivity shape mismatch");
  const std::size_t dim = bt.basis().size();
  const auto lower = static_cast<std::ptrdiff_t>(bt.lowered_basis().size());
  // 2 M C column by column in parallel; the scatter below has write conflicts
  // (several m raise to the same k) and stays serial.
  std::vector<Complex> mc(static_cast<std::size_t>(lower) * n);
#pragma omp parallel
  {
    std::vector<Complex> col(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t l = 0; l < lower; ++l) {
      gather_column(bt, d_a, p, static_cast<std::size_t>(l), col.data());
      Complex* out = mc.data() + static_cast<std::size_t>(l) * n;
      for (int r = 0; r < n; ++r) {
        Complex s(0.0);
        for (int c = 0; c < n; ++c) s += m(r, c) * col[c];
        out[r] = 2.0 * s;
      }
    }
  }
  for (std::ptrdiff_t l = 0; l < lower; ++l) {
    const Complex* g = mc.data() + static_cast<std::size_t>(l) * n;
    for (int i = 0; i < d; ++i) {
      const std::size_t k = bt.raised_position(static_cast<std::size_t>(l), i);
      const double c = bt.raise_coefficient(static_cast<std::size_t>(l), i);
      for (int a = 0; a < d_a; ++a) grad[a * dim + k] += c * g[a * d + i];
    }
  }
}

void pullback(const BTensor& bt, int d_a, std::span<const Complex> p, const ComplexMatrix& m,
              std::span<Complex> grad) {
  if (work_estimate(bt, d_a) >= kParallelWorkThreshold && omp_get_max_threads() > 1 && !omp_in_parallel()) {
    pullback_omp(bt, d_a, p, m, grad);
  } else {
    pullback_serial(bt, d_a, p, m, grad);
  }
}

}  // namespace qpureb::kernels
