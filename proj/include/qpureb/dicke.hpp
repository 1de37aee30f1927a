// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dicke.hpp
 * @brief Symmetric-subspace (Dicke) basis of n qudits and the closed-form
 *        single-site marginals of Dicke outer products.
 *
 * A Dicke index is the occupation vector (k_0, ..., k_{d-1}) with sum n.
 * Bases are ordered lexicographically descending, i.e. (n,0,..) first.
 *
 * The marginal tensor
 *
 *   B(k, k')(i, j) = <i| Tr_{2..n} |D_k><D_k'| |j>
 *                  = (1/n) sqrt(k_i k'_j)   if k - e_i == k' - e_j, else 0
 *
 * factors through Sym_{n-1}: every nonzero entry comes from a unique
 * m = k - e_i = k' - e_j and equals c(m,i) c(m,j) with
 * c(m,i) = sqrt((m_i + 1) / n). The raising table (m, i) -> (k = m + e_i,
 * c(m,i)) is what the contraction kernels consume; the sparse d x d blocks are
 * materialized alongside for inspection.
 */

#pragma once

#include "qpureb/density_matrix.hpp"
#include "qpureb/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qpureb {

using Occupation = std::vector<int>;

// Exact binomial coefficient; throws SizeError on 64-bit overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// C(n+d-1, d-1)
std::size_t symmetric_dimension(int n, int d);

class DickeBasis {
 public:
  // n >= 0 (Sym_0 holds the single empty occupation), d >= 1.
  DickeBasis(int n, int d);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const Occupation& operator[](std::size_t pos) const { return indices_[pos]; }
  const std::vector<Occupation>& indices() const noexcept { return indices_; }

  // Inverse of operator[] by combinatorial ranking. Throws ArgumentError for
  // an occupation that is not in the basis.
  std::size_t position(std::span<const int> occupation) const;

 private:
  int n_;
  int d_;
  std::vector<Occupation> indices_;
};

// Public enumeration entry point: requires n >= 1 and d >= 2.
DickeBasis enumerate_basis(int n, int d);

inline constexpr std::size_t kDickeOracleCap = std::size_t{1} << 20;

// Explicit d^n amplitude vector of |D^n_k>; qudit 1 is the most significant
// digit. Throws SizeError above `cap` amplitudes.
ComplexVector dicke_state_vector(std::span<const int> occupation, int n, int d,
                                 std::size_t cap = kDickeOracleCap);

class BTensor {
 public:
  struct Block {
    std::size_t row = 0;
    std::size_t col = 0;
    std::vector<double> values;  // d x d, row-major in (i, j)

    double operator()(int i, int j, int d) const { return values[static_cast<std::size_t>(i) * d + j]; }
  };

  // n >= 1, d >= 2
  BTensor(int n, int d);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  const DickeBasis& basis() const noexcept { return upper_; }
  const DickeBasis& lowered_basis() const noexcept { return lower_; }

  // Raising table over Sym_{n-1} x [0, d).
  std::size_t raised_position(std::size_t m, int i) const { return raise_pos_[m * d_ + i]; }
  double raise_coefficient(std::size_t m, int i) const { return raise_coef_[m * d_ + i]; }
  std::span<const std::size_t> raised_positions() const noexcept { return raise_pos_; }
  std::span<const double> raise_coefficients() const noexcept { return raise_coef_; }

  // Sorted by (row, col); only pairs with a nonzero block are present.
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Block* find(std::size_t row, std::size_t col) const;
  // Dense d x d block (zero when absent).
  RealMatrix entry(std::size_t row, std::size_t col) const;

 private:
  int n_;
  int d_;
  DickeBasis upper_;
  DickeBasis lower_;
  std::vector<std::size_t> raise_pos_;
  std::vector<double> raise_coef_;
  std::vector<Block> blocks_;
};

// rho_AB = sum p_{a,k} p*_{b,k'} |a><b| (x) B(k,k') for coefficients laid out
// as p[a * dim + pos]. Throws ContractViolation when |p| deviates from one by
// more than 1e-10 or the length does not match d_a * dim.
DensityMatrix rdm_from_params(std::span<const Complex> p, int d_a, const BTensor& bt);

}  // namespace qpureb
