// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "qpureb/errors.hpp"
#include "qpureb/model_states.hpp"
#include "qpureb/varcircuit.hpp"

#include <gtest/gtest.h>

#include <numbers>

namespace qpureb {
namespace {

constexpr double kPi = std::numbers::pi;

// X^a Z^b on one qubit.
ComplexMatrix single_qubit_gate(double a, double b) {
  const Complex ea = std::polar(1.0, kPi * a);
  ComplexMatrix x(2, 2), z = ComplexMatrix::Zero(2, 2);
  x << 0.5 * (1.0 + ea), 0.5 * (1.0 - ea), 0.5 * (1.0 - ea), 0.5 * (1.0 + ea);
  z(0, 0) = 1.0;
  z(1, 1) = std::polar(1.0, kPi * b);
  return x * z;
}

CompressedState random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return testing::random_vector(2 * (n + 1), rng);
}

// <D_j| U^{(x)n} |D_k> in the full 2^n space.
ComplexMatrix symmetric_power_oracle(const ComplexMatrix& u, int n) {
  ComplexMatrix full = u;
  for (int i = 1; i < n; ++i) full = kron(full, u);
  std::vector<ComplexVector> dicke;
  for (int k = 0; k <= n; ++k) dicke.push_back(dicke_state_vector(Occupation{n - k, k}, n, 2));
  ComplexMatrix out(n + 1, n + 1);
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= n; ++k) out(j, k) = dicke[j].dot(full * dicke[k]);
  return out;
}

TEST(ApplyUa, Examples) {
  const int n = 3;
  const CompressedState s = random_state(n, 1);
  CompressedState t = s;
  apply_ua(t, n, {0.0, 0.0});
  EXPECT_LT((t - s).norm(), 1e-15);
  t = s;
  apply_ua(t, n, {1.0, 0.0});
  EXPECT_LT((t.head(n + 1) - s.tail(n + 1)).norm(), 1e-15);
  EXPECT_LT((t.tail(n + 1) - s.head(n + 1)).norm(), 1e-15);
  t = s;
  apply_ua(t, n, {0.37, 1.21});
  EXPECT_NEAR(t.norm(), 1.0, 1e-14);
  const ComplexMatrix u = single_qubit_gate(0.37, 1.21);
  for (int k = 0; k <= n; ++k) {
    EXPECT_LT(std::abs(t[k] - (u(0, 0) * s[k] + u(0, 1) * s[n + 1 + k])), 1e-15);
    EXPECT_LT(std::abs(t[n + 1 + k] - (u(1, 0) * s[k] + u(1, 1) * s[n + 1 + k])), 1e-15);
  }
}

TEST(ApplyUb, Examples) {
  const CompressedState s = random_state(4, 2);
  CompressedState t = s;
  apply_ub_symmetric(t, 4, {0.0, 0.0});
  EXPECT_LT((t - s).norm(), 1e-14);

  // Sym_1 is a single qubit.
  const CompressedState s1 = random_state(1, 3);
  CompressedState t1 = s1;
  apply_ub_symmetric(t1, 1, {0.61, -0.4});
  const ComplexMatrix u = single_qubit_gate(0.61, -0.4);
  EXPECT_LT((t1.head(2) - u * s1.head(2)).norm(), 1e-14);
  EXPECT_LT((t1.tail(2) - u * s1.tail(2)).norm(), 1e-14);
}

TEST(ApplyUb, MatchesFullSpaceOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(-2.0, 2.0);
  for (int n = 1; n <= 5; ++n)
    for (int rep = 0; rep < 3; ++rep) {
      const double a = ang(rng), b = ang(rng);
      const ComplexMatrix want = symmetric_power_oracle(single_qubit_gate(a, b), n);
      const CompressedState s = random_state(n, 10 * n + rep);
      CompressedState t = s;
      apply_ub_symmetric(t, n, {a, b});
      for (int blk = 0; blk < 2; ++blk)
        EXPECT_LT((t.segment(blk * (n + 1), n + 1) - want * s.segment(blk * (n + 1), n + 1)).norm(), 1e-12)
            << n;
    }
}

TEST(ApplyCnot, Examples) {
  const int n = 4;
  CompressedState s = CompressedState::Zero(2 * (n + 1));
  s[1] = 0.6;              // x = 0, one excitation
  s[n + 1 + 1] = 0.8;      // x = 1, occupation (3,1)
  CompressedState t = s;
  apply_cnot_all(t, n);
  EXPECT_EQ(t[1], s[1]);
  EXPECT_EQ(t[n + 1 + 3], s[n + 1 + 1]);  // (3,1) -> (1,3)
  apply_cnot_all(t, n);
  EXPECT_LT((t - s).norm(), 1e-15);
}

TEST(Gates, PreserveNorm) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(-2.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 2);
  const int n = 6;
  CompressedState s = random_state(n, 9);
  for (int i = 0; i < 1000; ++i) {
    switch (pick(rng)) {
      case 0: apply_ua(s, n, {ang(rng), ang(rng)}); break;
      case 1: apply_ub_symmetric(s, n, {ang(rng), ang(rng)}); break;
      default: apply_cnot_all(s, n);
    }
    ASSERT_NEAR(s.norm(), 1.0, 1e-12) << i;
  }
  CompressedState bad(3);
  EXPECT_THROW(apply_cnot_all(bad, n), ArgumentError);
}

TEST(Circuit, ZeroAnglesGiveProductState) {
  CircuitParams p{5, std::vector<LayerAngles>(3, LayerAngles{0, 0, 0, 0})};
  const PurebParams c = circuit_coefficients(p);
  const DensityMatrix sigma = rdm_from_params(c.raw(), 2, BTensor(5, 2));
  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz(0, 0) = 1.0;
  EXPECT_LT((sigma.matrix() - zz).norm(), 1e-14);
  const CircuitObjective obj(DensityMatrix(zz, {2, 2}), 5, 3, {});
  EXPECT_NEAR(obj.value_and_gradient(RealVector::Zero(12), nullptr), 0.0, 1e-12);
  const CircuitParams empty{2, {}};
  EXPECT_THROW(empty.validate(), ArgumentError);
}

TEST(Circuit, GradientMatchesFiniteDifferences) {
  for (int n : {2, 4, 7}) {
    const DensityMatrix rho = random_density_matrix(2, 2, 20 + n);
    const int layers = 3;
    const CircuitObjective obj(rho, n, layers, {});
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> ang(0.0, 2.0);
    RealVector x(4 * layers);
    for (auto& v : x) v = ang(rng);
    RealVector g;
    obj.value_and_gradient(x, &g);
    RealVector fd(x.size());
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      RealVector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (obj.value_and_gradient(xp, nullptr) - obj.value_and_gradient(xm, nullptr)) / (2 * h);
    }
    EXPECT_LE((g - fd).norm() / fd.norm(), 1e-6) << n;
  }
}

// The circuit reaches a subset of the coefficient parameterization.
TEST(Circuit, NeverBeatsCoefficientModel) {
  OptimizerConfig opt;
  opt.restarts = 3;
  CircuitConfig cfg{5, opt};
  for (double alpha : {0.6, 0.8, 1.0}) {
    const DensityMatrix rho = werner(2, alpha);
    const double coef = minimize_ree(rho, 4, opt).ree;
    const double circ = circuit_ree(rho, 4, cfg).ree;
    EXPECT_GE(circ, coef - 1e-6) << alpha;
  }
}

TEST(Circuit, JsonRoundTrip) {
  CircuitParams p{3, {LayerAngles{0.1, 0.2, 0.3, 0.4}, LayerAngles{1, 2, 3, 4}}};
  const CircuitParams q = circuit_from_json(nlohmann::json::parse(circuit_to_json(p).dump()));
  EXPECT_EQ(q.n, 3);
  EXPECT_EQ(q.layers, p.layers);
  const nlohmann::json short_layer = {{"n", 2}, {"layers", {{1, 2}}}};
  EXPECT_THROW(circuit_from_json(short_layer), ArgumentError);
}

}  // namespace
}  // namespace qpureb
