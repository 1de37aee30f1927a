// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Contraction kernels between pure-extension coefficients and the Dicke
// marginal tensor. Each kernel has a serial reference and an OpenMP variant;
// the dispatching entry points pick the OpenMP one for large inputs.
//
// With C[(a,i), m] = c(m,i) * p[a*dim + raise(m,i)] (m runs over Sym_{n-1}):
//   marginal:  sigma = C C^dagger
//   pullback:  grad[a*dim + raise(m,i)] += c(m,i) * (2 M C)[(a,i), m]
// The pullback turns the Hermitian sensitivity M = df/dsigma (in the sense
// df = Re Tr(M dsigma)) into the real gradient dF/dRe p + i dF/dIm p.

#pragma once

#include "qpureb/dicke.hpp"
#include "qpureb/linalg.hpp"

#include <span>

namespace qpureb::kernels {

void marginal_serial(const BTensor& bt, int d_a, std::span<const Complex> p, ComplexMatrix& sigma);
void marginal_omp(const BTensor& bt, int d_a, std::span<const Complex> p, ComplexMatrix& sigma);
void marginal(const BTensor& bt, int d_a, std::span<const Complex> p, ComplexMatrix& sigma);

// Accumulates into `grad`, which must already hold d_a * dim entries.
void pullback_serial(const BTensor& bt, int d_a, std::span<const Complex> p, const ComplexMatrix& m,
                     std::span<Complex> grad);
void pullback_omp(const BTensor& bt, int d_a, std::span<const Complex> p, const ComplexMatrix& m,
                  std::span<Complex> grad);
void pullback(const BTensor& bt, int d_a, std::span<const Complex> p, const ComplexMatrix& m,
              std::span<Complex> grad);

// Work (in complex multiply-adds) above which the dispatchers go parallel.
inline constexpr std::size_t kParallelWorkThreshold = std::size_t{1} << 18;

}  // namespace qpureb::kernels
