// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "qpureb/errors.hpp"
#include "qpureb/lbfgs.hpp"
#include "qpureb/model_states.hpp"
#include "qpureb/pureb.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace qpureb {
namespace {

struct Instance {
  int d_a, d_b, n;
};

// d_A d_B > dim Sym_{n-1} makes sigma rank deficient; both kinds are covered.
const Instance kInstances[] = {{2, 2, 3}, {2, 2, 4}, {2, 2, 6}, {3, 2, 4}, {2, 3, 3},
                               {3, 3, 3}, {1, 2, 2}, {2, 2, 1}, {3, 2, 7}, {2, 3, 5}};

double relative_gradient_error(const ReeObjective& obj, const std::vector<Complex>& raw) {
  std::vector<Complex> g(raw.size());
  obj.value_and_gradient(raw, g);
  const auto fd = testing::fd_gradient(obj, raw, 1e-5);
  return testing::vec_diff(g, fd) / testing::vec_norm(fd);
}

TEST(ReeObjective, ZeroOnOwnMarginal) {
  for (const auto& in : kInstances) {
    const auto bt = cached_b_tensor(in.n, in.d_b);
    const auto p = testing::random_coefficients(in.d_a * bt->basis().size(), 3 * in.n + in.d_a);
    const DensityMatrix rho = rdm_from_params(p, in.d_a, *bt);
    const ReeObjective obj(rho, bt, {});
    EXPECT_NEAR(obj.value(p), 0.0, 1e-9);
  }
  const auto bt = cached_b_tensor(6, 2);
  std::vector<Complex> p(2 * bt->basis().size(), Complex(0.0));
  p[0] = 1.0;
  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz(0, 0) = 1.0;
  EXPECT_NEAR(ReeObjective(DensityMatrix(zz, {2, 2}), bt, {}).value(p), 0.0, 1e-12);
}

TEST(ReeObjective, GaugeInvariant) {
  const DensityMatrix rho = random_density_matrix(2, 3, 4);
  const auto bt = cached_b_tensor(4, 3);
  const ReeObjective obj(rho, bt, {});
  const auto p = testing::random_coefficients(obj.parameter_count(), 8);
  const double f = obj.value(p);
  for (Complex c : {Complex(2.0, 0.0), Complex(-0.3, 1.7), Complex(0.0, 1e-3)}) {
    std::vector<Complex> q(p);
    for (auto& z : q) z *= c;
    EXPECT_NEAR(obj.value(q), f, 1e-12 * std::abs(f));
  }
}

TEST(ReeObjective, RejectsMismatchedShapes) {
  const DensityMatrix rho = random_density_matrix(2, 2, 4);
  EXPECT_THROW(ReeObjective(rho, cached_b_tensor(3, 3), {}), ArgumentError);
  const ReeObjective obj(rho, cached_b_tensor(3, 2), {});
  EXPECT_THROW(obj.value(std::vector<Complex>(3)), ArgumentError);
  EXPECT_THROW(obj.value(std::vector<Complex>(obj.parameter_count())), NumericalDomainError);
}

TEST(Gradient, FiniteDifferencesEigenBackend) {
  int count = 0;
  for (int rep = 0; rep < 3; ++rep)
    for (const auto& in : kInstances) {
      const DensityMatrix rho = random_density_matrix(in.d_a, in.d_b, 100 * rep + 7 * in.n + in.d_b);
      const auto bt = cached_b_tensor(in.n, in.d_b);
      const ReeObjective obj(rho, bt, {});
      // Unnormalized on purpose: the normalization chain rule is part of the contract.
      auto raw = testing::random_coefficients(obj.parameter_count(), 200 * rep + in.n);
      for (auto& z : raw) z *= 1.7;
      EXPECT_LE(relative_gradient_error(obj, raw), 1e-6) << in.d_a << " " << in.d_b << " " << in.n;
      ++count;
    }
  EXPECT_EQ(count, 30);
}

// The rational form needs a positive definite marginal, so only full-rank
// instances are compared at this tolerance.
TEST(Gradient, FiniteDifferencesPadeBackend) {
  OptimizerConfig cfg;
  cfg.backend = LogBackend::pade;
  const Instance full_rank[] = {{2, 2, 4}, {2, 2, 6}, {3, 2, 7}, {2, 3, 5}, {1, 2, 2}};
  for (const auto& in : full_rank) {
    const DensityMatrix rho = random_density_matrix(in.d_a, in.d_b, 31 * in.n);
    const ReeObjective obj(rho, cached_b_tensor(in.n, in.d_b), cfg);
    const auto raw = testing::random_coefficients(obj.parameter_count(), 17 * in.n + in.d_a);
    EXPECT_LE(relative_gradient_error(obj, raw), 1e-6) << in.d_a << " " << in.d_b << " " << in.n;
  }
}

TEST(Gradient, BackendsAgree) {
  OptimizerConfig pade;
  pade.backend = LogBackend::pade;
  const DensityMatrix rho = random_density_matrix(2, 2, 12);
  const auto bt = cached_b_tensor(6, 2);
  const auto raw = testing::random_coefficients(2 * bt->basis().size(), 13);
  const ReeObjective e(rho, bt, {}), p(rho, bt, pade);
  std::vector<Complex> ge(raw.size()), gp(raw.size());
  const double fe = e.value_and_gradient(raw, ge), fp = p.value_and_gradient(raw, gp);
  EXPECT_NEAR(fe, fp, 1e-9);
  EXPECT_LT(testing::vec_diff(ge, gp), 1e-7 * testing::vec_norm(ge));
}

TEST(Gradient, OrthogonalToCoefficients) {
  const DensityMatrix rho = random_density_matrix(3, 2, 21);
  const PurebParams p = PurebParams::random(3, 2, 5, 22);
  const auto g = gradient(p, rho, *cached_b_tensor(5, 2), {});
  Complex inner = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) inner += std::conj(p.raw()[i]) * g[i];
  EXPECT_LT(std::abs(inner.real()), 1e-8 * testing::vec_norm(g) * p.norm());
}

TEST(Gradient, VanishesAtExactPreimage) {
  const PurebParams p = example2_preimage_k4();
  const auto g = gradient(p, appendix_b_example2(0.5, 2), *cached_b_tensor(4, 2), {});
  EXPECT_LE(testing::vec_norm(g), 1e-7);
}

TEST(MinimizeRee, ProductStateHasExactExtension) {
  ComplexVector a(2), b(2);
  a << 1, 0;
  b << 1, 1;
  const DensityMatrix rho = product_state(a, b);
  for (int n : {1, 3, 8}) EXPECT_LE(minimize_ree(rho, n, {}).ree, 1e-9) << n;
}

TEST(MinimizeRee, WernerBoundaryAtFourCopies) {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  EXPECT_LE(minimize_ree(werner(2, 0.640), 4, cfg).ree, 1e-7);
  EXPECT_GT(minimize_ree(werner(2, 0.652), 4, cfg).ree, 1e-7);
  EXPECT_GT(minimize_ree(werner(2, 1.0), 8, cfg).ree, 0.05);
}

TEST(MinimizeRee, ExampleOneImprovesWithCopies) {
  const DensityMatrix rho = appendix_b_example1(0.233);
  const double r4 = minimize_ree(rho, 4, {}).ree;
  const double r8 = minimize_ree(rho, 8, {}).ree;
  EXPECT_LE(r8, r4 + 1e-10);
  EXPECT_GT(r4, 0.0);
}

TEST(MinimizeRee, LowerBoundsAnalyticRee) {
  OptimizerConfig cfg;
  cfg.restarts = 2;
  for (double alpha : {0.2, 0.5, 0.7, 0.9, 1.0}) {
    EXPECT_LE(minimize_ree(werner(2, alpha), 8, cfg).ree, werner_ree_analytic(2, alpha) + 5e-3) << alpha;
    EXPECT_LE(minimize_ree(isotropic(3, alpha), 4, cfg).ree, isotropic_ree_analytic(3, alpha) + 5e-3) << alpha;
  }
}

TEST(MinimizeRee, RestartsAreDeterministic) {
  OptimizerConfig cfg;
  cfg.restarts = 3;
  const DensityMatrix rho = werner(2, 0.8);
  const OptimizerResult a = minimize_ree(rho, 6, cfg), b = minimize_ree(rho, 6, cfg);
  ASSERT_EQ(a.per_restart.size(), 3u);
  EXPECT_EQ(a.per_restart, b.per_restart);
  EXPECT_EQ(a.ree, *std::min_element(a.per_restart.begin(), a.per_restart.end()));
  cfg.seed += 1;
  EXPECT_NE(minimize_ree(rho, 6, cfg).per_restart, a.per_restart);
}

TEST(MinimizeRee, PadeBackendAgreesOnEntangledState) {
  OptimizerConfig pade;
  pade.backend = LogBackend::pade;
  const DensityMatrix rho = werner(2, 0.9);
  const double e = minimize_ree(rho, 6, {}).ree, p = minimize_ree(rho, 6, pade).ree;
  EXPECT_NEAR(e, p, 1e-6);
}

// Mean over a fixed sample of separable states does not grow as n doubles.
TEST(MinimizeRee, SeparableMeanDecreasesInN) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DensityMatrix> sample;
  for (int s = 0; s < 4; ++s) {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    double total = 0.0;
    for (int t = 0; t < 3; ++t) {
      const double w = u(rng);
      total += w;
      m += w * product_state(testing::random_vector(2, rng), testing::random_vector(2, rng)).matrix();
    }
    sample.emplace_back(m / total, Dims{2, 2});
  }
  OptimizerConfig cfg;
  cfg.restarts = 3;
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {2, 4, 8}) {
    double mean = 0.0;
    for (const auto& rho : sample) mean += minimize_ree(rho, n, cfg).ree / sample.size();
    EXPECT_LE(mean, prev + 1e-8) << n;
    prev = mean;
  }
}

TEST(MinimizeRee, StopBelowEndsEarly) {
  OptimizerConfig cfg;
  cfg.restarts = 5;
  cfg.stop_below = 1e-9;
  const OptimizerResult r = minimize_ree(werner(2, 0.3), 4, cfg);
  EXPECT_LE(r.ree, 1e-9);
  EXPECT_EQ(r.restarts_used, 1);
}

TEST(ReeCurve, WarmStartAndThreadsAgree) {
  const std::vector<double> alphas{0.1, 0.4, 0.7, 1.0};
  const StateFamily fam = [](double a) { return werner(2, a); };
  const auto serial = ree_curve(fam, alphas, 6, {}, false, 1);
  const auto threaded = ree_curve(fam, alphas, 6, {}, false, 4);
  const auto warm = ree_curve(fam, alphas, 6, {}, true, 1);
  ASSERT_EQ(serial.size(), alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    EXPECT_EQ(serial[i].ree, threaded[i].ree);
    EXPECT_NEAR(serial[i].ree, warm[i].ree, 1e-6);
  }
  EXPECT_LE(serial[0].ree, 1e-7);
}

TEST(Checkpoint, RoundTrip) {
  const OptimizerResult r = minimize_ree(werner(2, 0.9), 3, {});
  const nlohmann::json j = checkpoint_json(r, {});
  const PurebParams back = params_from_checkpoint(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(testing::vec_diff(back.raw(), r.params.raw()), 0.0);
  EXPECT_EQ(j.at("backend"), "eigen");
  const nlohmann::json partial = {{"d_a", 2}};
  EXPECT_THROW(params_from_checkpoint(partial), ArgumentError);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.restarts = 0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.tolerance = 0.0;
  EXPECT_THROW(c.validate(), ArgumentError);
  EXPECT_THROW(log_backend_from_string("taylor"), ArgumentError);
  EXPECT_EQ(log_backend_from_string(to_string(LogBackend::pade)), LogBackend::pade);
}

TEST(Lbfgs, MinimizesRosenbrock) {
  const LbfgsObjective f = [](const RealVector& x, RealVector& g) {
    g.resize(2);
    g[0] = -2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] * x[0]);
    g[1] = 200 * (x[1] - x[0] * x[0]);
    return (1 - x[0]) * (1 - x[0]) + 100 * std::pow(x[1] - x[0] * x[0], 2);
  };
  LbfgsOptions opts;
  opts.ftol = 1e-16;
  const LbfgsResult r = lbfgs_minimize(f, RealVector::Constant(2, -1.2), opts);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
}

}  // namespace
}  // namespace qpureb
