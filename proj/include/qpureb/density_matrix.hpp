// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qpureb/linalg.hpp"

#include <cstdint>
#include <span>

namespace qpureb {

// Local dimensions of a bipartite system A (x) B.
struct Dims {
  int a = 0;
  int b = 0;

  int total() const noexcept { return a * b; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

inline constexpr double kStateHermitianTolerance = 1e-12;
inline constexpr double kStateTraceTolerance = 1e-12;
inline constexpr double kStatePsdTolerance = 1e-10;

/// Trace-one positive semidefinite matrix on C^{d_A} (x) C^{d_B}.
///
/// Construction validates the invariants and throws ContractViolation when
/// they fail; the stored matrix is the exact Hermitian part of the input.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix m, Dims dims);

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  Dims dims() const noexcept { return dims_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

  static DensityMatrix maximally_mixed(Dims dims);

 private:
  ComplexMatrix mat_;
  Dims dims_;
};

// Transposes the B factor.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims);
ComplexMatrix partial_transpose(const DensityMatrix& rho);

// Reduced density matrix of |psi><psi| on the first two tensor factors of
// `dims`, tracing out the rest. Throws ArgumentError on length mismatch.
ComplexMatrix partial_trace_tail(const ComplexVector& psi, std::span<const int> dims);

// Tr(rho ln rho) evaluated on the support of rho.
double entropy_term(const ComplexMatrix& rho);

// S(rho || sigma) = Tr(rho ln rho) - Tr(rho ln sigma) with sigma's spectrum
// floored at `floor`.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        double floor = kDefaultLogFloor);

// Ginibre-induced sample G G^dagger / Tr(G G^dagger).
DensityMatrix random_density_matrix(int d_a, int d_b, std::uint64_t seed);

// |a><a| (x) |b><b| for normalized copies of a and b.
DensityMatrix product_state(const ComplexVector& a, const ComplexVector& b);

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);

}  // namespace qpureb
