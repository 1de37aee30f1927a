// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file gellmann.hpp
 * @brief Generalized Gell-Mann coordinates rho = I/d + sum_a v_a lambda_a.
 *
 * Ordering of the d^2-1 generators: the real symmetric off-diagonal ones for
 * index pairs (j,k), j<k, in lexicographic order; then the imaginary
 * antisymmetric ones in the same order; then the d-1 diagonal ones.
 * Normalization is Tr(lambda_a lambda_b) = 2 delta_ab.
 */

#pragma once

#include "qpureb/density_matrix.hpp"
#include "qpureb/linalg.hpp"

#include <vector>

namespace qpureb {

class GellMannBasis {
 public:
  explicit GellMannBasis(int d);

  int d() const noexcept { return d_; }
  int size() const noexcept { return static_cast<int>(mats_.size()); }
  const ComplexMatrix& operator[](int a) const { return mats_.at(a); }
  const std::vector<ComplexMatrix>& matrices() const noexcept { return mats_; }

 private:
  int d_;
  std::vector<ComplexMatrix> mats_;
};

// Real coordinates of a d x d matrix relative to I/d.
struct StateVector {
  RealVector vec;
  int d = 0;

  double norm() const { return vec.norm(); }
};

// v_a = Tr(m lambda_a) / 2.
StateVector gellmann_decompose(const ComplexMatrix& m);
StateVector gellmann_decompose(const DensityMatrix& rho);

// sum_a v_a lambda_a (the traceless part only).
ComplexMatrix gellmann_combination(const StateVector& v);

// I/d + sum_a v_a lambda_a. The result is Hermitian with unit trace but need
// not be positive semidefinite.
ComplexMatrix gellmann_reconstruct(const StateVector& v);

// Validated variant; throws ContractViolation when the point lies outside the
// state space.
DensityMatrix gellmann_reconstruct(const StateVector& v, Dims dims);

}  // namespace qpureb
