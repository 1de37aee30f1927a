// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Model states with known separability structure and analytic references.

#pragma once

#include "qpureb/density_matrix.hpp"
#include "qpureb/pureb_params.hpp"

#include <array>
#include <string>
#include <vector>

namespace qpureb {

// rho_W(alpha) = (I - alpha F) / (d^2 - d alpha), F the swap; alpha in [-1, 1].
DensityMatrix werner(int d, double alpha);

// rho_I(alpha) = (1 - alpha) I / d^2 + alpha |psi+><psi+|;
// alpha in [-1/(d^2 - 1), 1].
DensityMatrix isotropic(int d, double alpha);

// Swap operator on C^d (x) C^d.
ComplexMatrix swap_operator(int d);

// Maximally entangled (1/sqrt d) sum_i |ii>.
ComplexVector maximally_entangled(int d);

// REE of the two families; zero below alpha = 1/d (Werner) and
// alpha = 1/(d+1) (isotropic).
double werner_ree_analytic(int d, double alpha);
double isotropic_ree_analytic(int d, double alpha);

enum class UpbName { tiles, pyramid };

UpbName upb_name_from_string(const std::string& name);
std::string to_string(UpbName name);

struct ProductVector {
  ComplexVector a;
  ComplexVector b;

  ComplexVector joint() const;
};

/// Five orthonormal product vectors in 3 (x) 3 with no product vector in
/// their orthogonal complement.
struct UpbSet {
  UpbName name;
  std::array<ProductVector, 5> vectors;
};

UpbSet upb_set(UpbName name);

// Checks that no product vector is orthogonal to every member: for each
// split S of the set, either the A parts of S or the B parts of the rest
// span the whole local space.
bool is_unextendible(const UpbSet& set, double rank_tolerance = 1e-10);

// (I - sum_i |psi_i><psi_i|) / 4, a rank 4 PPT entangled state.
DensityMatrix upb_bes(UpbName name);

// lam |0><0| (x) |1><1| + (1 - lam) |1><1| (x) |+><+|
DensityMatrix appendix_b_example1(double lam);

// Marginal on A B_1 of sqrt(lam) |0>|1>^k + sqrt(1 - lam) |1>|+>^k:
// example1 plus sqrt(lam (1 - lam)) 2^{-(k-1)/2} (|0><1| (x) |1><+| + h.c.).
DensityMatrix appendix_b_example1_marginal(double lam, int k);

// The trial extension above in A (x) Sym_k(C^2) coordinates.
PurebParams appendix_b_example1_trial(double lam, int k);

// lam I/d (x) |0><0| + (1 - lam) I/d (x) |1><1| on C^d (x) C^2.
DensityMatrix appendix_b_example2(double lam, int d);

// Exact pure 4-bosonic preimage of appendix_b_example2(0.5, 2):
// |0>(b|D0> - a|D2> + b|D4>) + 0.5 |1>(|D1> + |D3>),  a = 1/(2 sqrt 2), b = sqrt(3)/4.
PurebParams example2_preimage_k4();

}  // namespace qpureb
