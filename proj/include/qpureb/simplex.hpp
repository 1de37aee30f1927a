// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Dense two-phase revised simplex for  max c^T x  s.t.  A x = b,  x >= 0.

#pragma once

#include "qpureb/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qpureb {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(LpStatus status);

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-10;
  double pivot_tol = 1e-9;
  int max_iters = 50000;
  int refactor_every = 50;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_limit = 50;
  // Scale of the random right-hand-side perturbation used against
  // degeneracy; 0 disables it.
  double perturbation = 1e-7;
  std::uint64_t perturbation_seed = 1;
};

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  RealVector x;
  double objective = 0.0;
  // Simplex multipliers y = c_B^T B^{-1} of the final basis; reduced costs
  // are c_j - y^T A_j.
  RealVector dual;
  std::vector<int> basis;
  int iterations = 0;
};

// `warm_basis` (m structural column indices) skips phase 1 when it is
// nonsingular and primal feasible; otherwise the solve starts cold.
LpResult simplex_maximize(const RealMatrix& a, const RealVector& b, const RealVector& c,
                          const SimplexOptions& opts = {}, const std::vector<int>* warm_basis = nullptr);

}  // namespace qpureb
