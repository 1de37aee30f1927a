// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file pureb.hpp
 * @brief Relative-entropy lower bounds from pure bosonic extensions.
 *
 * For a target rho on A (x) B and an extension count n, minimizes
 *
 *     E(p~) = S(rho || sigma(p)),   p = p~ / |p~|,
 *     sigma(p) = Tr_{B_2..B_n} |psi><psi|,  |psi> = sum p_{a,k} |a>|D^n_k>
 *
 * over the unnormalized coefficients p~ with L-BFGS and random restarts.
 * Gradients go through the Daleckii-Krein Frechet derivative of log (eigen
 * backend) or through the Gauss-Legendre rational form and Sylvester solves
 * for the square roots (pade backend).
 */

#pragma once

#include "qpureb/density_matrix.hpp"
#include "qpureb/dicke.hpp"
#include "qpureb/pureb_params.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpureb {

enum class LogBackend { eigen, pade };

// Identity shift applied to sigma before the Pade logarithm.
inline constexpr double kPadeShift = 1e-12;
// Eigen backend: eigenvalues below max(floor, scale * D * eps) are clamped.
inline constexpr double kRoundoffFloorScale = 16.0;

std::string to_string(LogBackend backend);
LogBackend log_backend_from_string(const std::string& name);

struct OptimizerConfig {
  double tolerance = 1e-10;
  int restarts = 3;
  int max_iters = 2000;
  LogBackend backend = LogBackend::eigen;
  int pade_nodes = 8;
  int pade_roots = 6;
  double floor = kDefaultLogFloor;
  std::uint64_t seed = 20220917;
  // When positive, a restart stops once the objective reaches this value and
  // no further restarts are run.
  double stop_below = 0.0;
  int lbfgs_memory = 10;

  // Throws ArgumentError on tolerance <= 0, restarts < 1, ...
  void validate() const;
};

struct OptimizerResult {
  double ree = 0.0;
  PurebParams params;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  std::vector<double> per_restart;
};

// Shared, immutable marginal tensors keyed by (n, d_B).
std::shared_ptr<const BTensor> cached_b_tensor(int n, int d_b);

/// S(rho || sigma(p)) and its gradient for a fixed target and tensor.
class ReeObjective {
 public:
  ReeObjective(const DensityMatrix& rho, std::shared_ptr<const BTensor> bt,
               const OptimizerConfig& cfg);

  const DensityMatrix& target() const noexcept { return rho_; }
  const BTensor& tensor() const noexcept { return *bt_; }
  int d_a() const noexcept { return rho_.dims().a; }
  std::size_t parameter_count() const noexcept;

  // On unnormalized coefficients.
  double value(std::span<const Complex> raw) const;
  // `grad` receives dE/dRe p~ + i dE/dIm p~.
  double value_and_gradient(std::span<const Complex> raw, std::span<Complex> grad) const;

  // On unit-norm coefficients, without the normalization chain rule.
  double value_and_state_gradient(std::span<const Complex> p, std::span<Complex> grad) const;

  // Value for a given marginal sigma; `sensitivity` (optional) receives the
  // Hermitian M with dE = Re Tr(M dsigma).
  double value_of_marginal(const ComplexMatrix& sigma, ComplexMatrix* sensitivity) const;

 private:
  DensityMatrix rho_;
  std::shared_ptr<const BTensor> bt_;
  OptimizerConfig cfg_;
  double entropy_term_;
};

double objective(const PurebParams& p, const DensityMatrix& rho, const BTensor& bt,
                 const OptimizerConfig& cfg);

std::vector<Complex> gradient(const PurebParams& p, const DensityMatrix& rho, const BTensor& bt,
                              const OptimizerConfig& cfg);

OptimizerResult minimize_ree(const DensityMatrix& rho, int n, const OptimizerConfig& cfg);

// Restart 0 starts from `warm_start` when given; the rest are random.
OptimizerResult minimize_ree(const DensityMatrix& rho, std::shared_ptr<const BTensor> bt,
                             const OptimizerConfig& cfg, const PurebParams* warm_start = nullptr);

struct CurvePoint {
  double alpha = 0.0;
  double ree = 0.0;
  bool converged = false;
};

using StateFamily = std::function<DensityMatrix(double)>;

// One minimization per alpha. With warm_start the points are solved in order
// and each starts from the previous optimum; otherwise they are independent
// and mapped over `threads` workers.
std::vector<CurvePoint> ree_curve(const StateFamily& family, std::span<const double> alphas, int n,
                                  const OptimizerConfig& cfg, bool warm_start, int threads = 1);

// {d_a, d_b, n, raw_re, raw_im, objective, seed, backend}
nlohmann::json checkpoint_json(const OptimizerResult& result, const OptimizerConfig& cfg);
PurebParams params_from_checkpoint(const nlohmann::json& j);

}  // namespace qpureb
