// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Limited-memory BFGS with a strong-Wolfe line search. When two line searches
// in a row fail, a backtracking steepest-descent step is taken instead.

#pragma once

#include "qpureb/linalg.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace qpureb {

struct LbfgsOptions {
  int memory = 10;
  int max_iters = 2000;
  // Converged when |f_k - f_{k+1}| <= ftol * max(1, |f_k|, |f_{k+1}|).
  double ftol = 1e-10;
  // Converged when max_i |g_i| <= gtol.
  double gtol = 1e-14;
  // Early exit as soon as f <= stop_below.
  double stop_below = -std::numeric_limits<double>::infinity();
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search = 40;
};

struct LbfgsResult {
  RealVector x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string reason;
  std::vector<double> history;  // accepted objective values, starting with f(x0)
};

// Returns f(x) and writes the gradient into `grad` (already sized like x).
using LbfgsObjective = std::function<double(const RealVector& x, RealVector& grad)>;

LbfgsResult lbfgs_minimize(const LbfgsObjective& fun, RealVector x0, const LbfgsOptions& opts = {});

}  // namespace qpureb
