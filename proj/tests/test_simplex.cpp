// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/errors.hpp"
#include "qpureb/simplex.hpp"

#include <gtest/gtest.h>

#include <Eigen/LU>

#include <random>

namespace qpureb {
namespace {

// Best basic feasible solution by enumerating every basis.
std::optional<double> vertex_oracle(const RealMatrix& a, const RealVector& b, const RealVector& c) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  std::optional<double> best;
  std::vector<int> pick(m);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == m) {
      RealMatrix basis(m, m);
      for (int i = 0; i < m; ++i) basis.col(i) = a.col(pick[i]);
      Eigen::FullPivLU<RealMatrix> lu(basis);
      if (lu.rank() < m) return;
      const RealVector xb = lu.solve(b);
      if (xb.minCoeff() < -1e-12) return;
      double obj = 0.0;
      for (int i = 0; i < m; ++i) obj += c[pick[i]] * xb[i];
      if (!best || obj > *best) best = obj;
      return;
    }
    for (int j = start; j < n; ++j) {
      pick[depth] = j;
      rec(j + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

TEST(Simplex, SmallKnownProgram) {
  // max 3x + 2y  s.t.  x + y + s1 = 4,  x + 3y + s2 = 6
  RealMatrix a(2, 4);
  a << 1, 1, 1, 0, 1, 3, 0, 1;
  const RealVector b = (RealVector(2) << 4, 6).finished();
  const RealVector c = (RealVector(4) << 3, 2, 0, 0).finished();
  const LpResult r = simplex_maximize(a, b, c);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, 12.0, 1e-10);
  EXPECT_NEAR(r.x[0], 4.0, 1e-10);
  EXPECT_LT((a * r.x - b).norm(), 1e-10);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  RealMatrix a(1, 2);
  a << 1, 1;
  const RealVector neg = RealVector::Constant(1, -1.0);
  EXPECT_EQ(simplex_maximize(a, neg, RealVector::Ones(2)).status, LpStatus::infeasible);

  RealMatrix u(1, 2);
  u << 1, -1;
  EXPECT_EQ(simplex_maximize(u, RealVector::Ones(1), RealVector::Ones(2)).status, LpStatus::unbounded);
  EXPECT_THROW(simplex_maximize(u, RealVector::Ones(2), RealVector::Ones(2)), ArgumentError);
}

TEST(Simplex, MatchesVertexEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 3, n = m + 2 + trial % 5;
    RealMatrix a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = u(rng);
    // Feasible by construction and bounded through a normalization row.
    RealVector x0(n);
    for (int j = 0; j < n; ++j) x0[j] = 0.5 * (u(rng) + 1.0);
    a.row(m - 1).setOnes();
    const RealVector b = a * x0;
    RealVector c(n);
    for (int j = 0; j < n; ++j) c[j] = u(rng);
    const auto oracle = vertex_oracle(a, b, c);
    ASSERT_TRUE(oracle.has_value());
    const LpResult r = simplex_maximize(a, b, c);
    ASSERT_EQ(r.status, LpStatus::optimal) << trial;
    EXPECT_NEAR(r.objective, *oracle, 1e-8) << trial;
    EXPECT_GE(r.x.minCoeff(), -1e-9);
    EXPECT_LT((a * r.x - b).norm(), 1e-8);
    // Dual feasibility of the returned multipliers.
    EXPECT_LE((c - a.transpose() * r.dual).maxCoeff(), 1e-8);
    ++solved;
  }
  EXPECT_EQ(solved, 200);
}

// A highly degenerate program: many columns through the same vertex.
TEST(Simplex, DegenerateProgramTerminates) {
  const int m = 6, n = 400;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealMatrix a = RealMatrix::Zero(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = j < m ? (i == j) : std::round(u(rng));
  const RealVector b = RealVector::Zero(m);
  RealVector c(n);
  for (int j = 0; j < n; ++j) c[j] = u(rng) - 0.5;
  a.row(m - 1).setOnes();
  RealVector rhs = b;
  rhs[m - 1] = 1.0;
  const LpResult r = simplex_maximize(a, rhs, c);
  ASSERT_EQ(r.status, LpStatus::optimal);
  // Primal and dual feasibility together certify optimality.
  EXPECT_GE(r.x.minCoeff(), -1e-9);
  EXPECT_LT((a * r.x - rhs).norm(), 1e-9);
  EXPECT_LE((c - a.transpose() * r.dual).maxCoeff(), 1e-8);
  EXPECT_NEAR(r.objective, rhs.dot(r.dual), 1e-8);
  EXPECT_LT(r.iterations, 5000);
}

TEST(Simplex, WarmStartReusesBasis) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int m = 4, n = 60;
  RealMatrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  a.row(m - 1).setOnes();
  const RealVector x0 = RealVector::Constant(n, 1.0 / n);
  const RealVector b = a * x0;
  RealVector c(n);
  for (int j = 0; j < n; ++j) c[j] = u(rng);
  const LpResult cold = simplex_maximize(a, b, c);
  ASSERT_EQ(cold.status, LpStatus::optimal);
  const LpResult warm = simplex_maximize(a, b, c, {}, &cold.basis);
  ASSERT_EQ(warm.status, LpStatus::optimal);
  EXPECT_NEAR(warm.objective, cold.objective, 1e-10);
  EXPECT_LE(warm.iterations, 2);
  // A bad warm basis falls back to a cold start.
  const std::vector<int> bad(m, 0);
  EXPECT_NEAR(simplex_maximize(a, b, c, {}, &bad).objective, cold.objective, 1e-10);
}

}  // namespace
}  // namespace qpureb
