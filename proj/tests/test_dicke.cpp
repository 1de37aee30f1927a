// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "qpureb/dicke.hpp"
#include "qpureb/errors.hpp"
#include "qpureb/kernels.hpp"
#include "qpureb/model_states.hpp"
#include "qpureb/pureb_params.hpp"

#include <gtest/gtest.h>

#include <set>

namespace qpureb {
namespace {

TEST(DickeBasis, Examples) {
  const DickeBasis b = enumerate_basis(4, 2);
  const std::vector<Occupation> want{{4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}};
  EXPECT_EQ(b.indices(), want);
  EXPECT_EQ(enumerate_basis(2, 3).size(), 6u);
  EXPECT_EQ(enumerate_basis(1, 5).size(), 5u);
  EXPECT_THROW(enumerate_basis(0, 2), ArgumentError);
  EXPECT_THROW(enumerate_basis(3, 1), ArgumentError);
}

TEST(DickeBasis, CompleteOrderedAndRanked) {
  for (int n = 1; n <= 7; ++n)
    for (int d = 2; d <= 4; ++d) {
      const DickeBasis b(n, d);
      EXPECT_EQ(b.size(), binomial(n + d - 1, d - 1));
      EXPECT_EQ(b.size(), symmetric_dimension(n, d));
      std::set<Occupation> seen(b.indices().begin(), b.indices().end());
      EXPECT_EQ(seen.size(), b.size());
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (i > 0) EXPECT_GT(b[i - 1], b[i]);
        EXPECT_EQ(b.position(b[i]), i);
      }
    }
}

TEST(Binomial, OverflowIsReported) {
  EXPECT_EQ(binomial(60, 30), 118264581564861424ull);
  EXPECT_THROW(binomial(200, 100), SizeError);
}

TEST(DickeStateVector, Examples) {
  const ComplexVector d22 = dicke_state_vector(Occupation{2, 2}, 4, 2);
  ASSERT_EQ(d22.size(), 16);
  // Basis index bit 3 is the first qubit; "1" means the qudit is in state 1.
  for (int x = 0; x < 16; ++x) {
    const double want = std::popcount(static_cast<unsigned>(x)) == 2 ? 1.0 / std::sqrt(6.0) : 0.0;
    EXPECT_NEAR(std::abs(d22[x] - want), 0.0, 1e-15) << x;
  }
  const ComplexVector d11 = dicke_state_vector(Occupation{1, 1}, 2, 2);
  EXPECT_NEAR(d11[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d11[2].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(d11[0]) + std::abs(d11[3]), 0.0, 1e-15);
  const ComplexVector d30 = dicke_state_vector(Occupation{3, 0}, 3, 2);
  EXPECT_NEAR(d30[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(d30.norm(), 1.0, 1e-15);
  EXPECT_THROW(dicke_state_vector(Occupation{1, 1}, 3, 2), ArgumentError);
  EXPECT_THROW(dicke_state_vector(Occupation{21, 0}, 21, 2, std::size_t{1} << 20), SizeError);
}

TEST(BTensor, Examples) {
  const BTensor bt(4, 2);
  const DickeBasis& b = bt.basis();
  const std::size_t k22 = b.position(Occupation{2, 2}), k31 = b.position(Occupation{3, 1});
  const RealMatrix diag22 = bt.entry(k22, k22);
  EXPECT_NEAR(diag22(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(diag22(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(diag22(0, 1)) + std::abs(diag22(1, 0)), 0.0, 1e-15);
  const RealMatrix off = bt.entry(k31, k22);
  EXPECT_NEAR(off(0, 1), std::sqrt(6.0) / 4.0, 1e-15);
  EXPECT_NEAR(off.cwiseAbs().sum() - std::abs(off(0, 1)), 0.0, 1e-15);
  const std::size_t k40 = b.position(Occupation{4, 0}), k04 = b.position(Occupation{0, 4});
  EXPECT_EQ(bt.find(k40, k04), nullptr);
  EXPECT_EQ(bt.entry(k40, k22).norm(), 0.0);
}

// Every entry of the tensor against the full-space partial trace.
TEST(BTensor, MatchesFullSpaceOracle) {
  for (int n = 1; n <= 5; ++n)
    for (int d = 2; d <= 3; ++d) {
      const BTensor bt(n, d);
      const std::size_t dim = bt.basis().size();
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t kp = 0; kp < dim; ++kp) {
          const RealMatrix want = testing::b_entry_oracle(n, d, k, kp);
          ASSERT_LT((bt.entry(k, kp) - want).cwiseAbs().maxCoeff(), 1e-12) << n << " " << d << " " << k << " " << kp;
        }
    }
}

// Nonzero pairs are exactly (m + e_i, m + e_j) for m in Sym_{n-1}.
TEST(BTensor, PairCountIsCombinatorial) {
  for (int n = 1; n <= 6; ++n)
    for (int d = 2; d <= 4; ++d) {
      const BTensor bt(n, d);
      std::set<std::pair<std::size_t, std::size_t>> pairs;
      const DickeBasis lower(n - 1, d);
      for (std::size_t m = 0; m < lower.size(); ++m)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            Occupation ki = lower[m], kj = lower[m];
            ++ki[i];
            ++kj[j];
            pairs.insert({bt.basis().position(ki), bt.basis().position(kj)});
          }
      EXPECT_EQ(bt.blocks().size(), pairs.size()) << n << " " << d;
    }
}

TEST(RdmFromParams, Examples) {
  const BTensor bt(5, 2);
  std::vector<Complex> p(2 * bt.basis().size(), Complex(0.0));
  p[0] = 1.0;
  const DensityMatrix prod = rdm_from_params(p, 2, bt);
  ComplexMatrix want = ComplexMatrix::Zero(4, 4);
  want(0, 0) = 1.0;
  EXPECT_LT((prod.matrix() - want).cwiseAbs().maxCoeff(), 1e-15);

  const PurebParams pre = example2_preimage_k4();
  const DensityMatrix m = rdm_from_params(pre.raw(), 2, BTensor(4, 2));
  EXPECT_LT((m.matrix() - ComplexMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-12);

  p[1] = 1.0;
  EXPECT_THROW(rdm_from_params(p, 2, bt), ContractViolation);
  p.pop_back();
  EXPECT_THROW(rdm_from_params(p, 2, bt), ContractViolation);
}

TEST(RdmFromParams, MatchesOracleOnRandomCoefficients) {
  for (int n = 1; n <= 5; ++n)
    for (int d_b = 2; d_b <= 3; ++d_b)
      for (int d_a = 1; d_a <= 3; ++d_a) {
        const BTensor bt(n, d_b);
        const auto p = testing::random_coefficients(d_a * bt.basis().size(), 1000 * n + 10 * d_b + d_a);
        const DensityMatrix sigma = rdm_from_params(p, d_a, bt);
        const ComplexMatrix want = testing::marginal_oracle(p, d_a, d_b, n);
        EXPECT_LT((sigma.matrix() - want).cwiseAbs().maxCoeff(), 1e-12) << n << " " << d_b << " " << d_a;
      }
}

TEST(Kernels, ParallelMatchesSerial) {
  const BTensor bt(12, 3);
  const int d_a = 3;
  const auto p = testing::random_coefficients(d_a * bt.basis().size(), 77);
  ComplexMatrix s1, s2;
  kernels::marginal_serial(bt, d_a, p, s1);
  kernels::marginal_omp(bt, d_a, p, s2);
  EXPECT_LT((s1 - s2).cwiseAbs().maxCoeff(), 1e-14);

  const ComplexMatrix m = testing::random_hermitian(d_a * 3, 78);
  std::vector<Complex> g1(p.size()), g2(p.size());
  kernels::pullback_serial(bt, d_a, p, m, g1);
  kernels::pullback_omp(bt, d_a, p, m, g2);
  EXPECT_LT(testing::vec_diff(g1, g2), 1e-12 * testing::vec_norm(g1));
}

// The pullback is the adjoint of the marginal's derivative:
// Re Tr(M dsigma) = Re <G, dp> for sigma = C C^dagger.
TEST(Kernels, PullbackIsTheMarginalDerivative) {
  const BTensor bt(4, 2);
  const int d_a = 2;
  auto p = testing::random_coefficients(d_a * bt.basis().size(), 5);
  const auto dp = testing::random_coefficients(p.size(), 6);
  const ComplexMatrix m = testing::random_hermitian(4, 7);
  std::vector<Complex> g(p.size());
  kernels::pullback(bt, d_a, p, m, g);
  const double h = 1e-6;
  auto shifted = [&](double s) {
    std::vector<Complex> q(p);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += s * dp[i];
    ComplexMatrix sigma;
    kernels::marginal(bt, d_a, q, sigma);
    return (m * sigma).trace().real();
  };
  const double fd = (shifted(h) - shifted(-h)) / (2 * h);
  double inner = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) inner += (std::conj(g[i]) * dp[i]).real();
  EXPECT_NEAR(inner, fd, 1e-8 * std::abs(fd) + 1e-10);
}

TEST(PurebParams, CountAndNormalization) {
  EXPECT_EQ(pureb_parameter_count(2, 2, 8), 18u);
  EXPECT_EQ(pureb_parameter_count(3, 3, 4), 3u * 15u);
  const PurebParams p = PurebParams::random(2, 3, 4, 9);
  EXPECT_EQ(p.size(), 30u);
  EXPECT_NEAR(testing::vec_norm(p.normalized()), 1.0, 1e-15);
  const PurebParams q = PurebParams::random(2, 3, 4, 9);
  EXPECT_EQ(testing::vec_diff(p.raw(), q.raw()), 0.0);
  EXPECT_THROW(PurebParams(2, 2, 4, std::vector<Complex>(3)), ArgumentError);
}

}  // namespace
}  // namespace qpureb
