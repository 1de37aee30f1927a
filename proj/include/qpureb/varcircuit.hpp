// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file varcircuit.hpp
 * @brief Symmetric variational circuit on C^2 (x) Sym_n(C^2).
 *
 * Amplitudes are stored as psi[a * (n + 1) + k] with k the number of ones
 * in the Dicke label, which is the Dicke basis position for qubits. A layer
 * applies U_A = X^a Z^b to the A qubit, the CNOT from A to every B qubit,
 * then U_B^{(x)n} restricted to the symmetric subspace, with
 *
 *     X^t = ((1 + e^{i pi t}) I + (1 - e^{i pi t}) X) / 2,
 *     Z^t = diag(1, e^{i pi t}).
 */

#pragma once

#include "qpureb/geometry.hpp"
#include "qpureb/pureb.hpp"

#include <json.hpp>

#include <array>
#include <utility>
#include <vector>

namespace qpureb {

using CompressedState = ComplexVector;

// (a_A, b_A, a_B, b_B) for one layer.
using LayerAngles = std::array<double, 4>;

struct CircuitParams {
  int n = 1;
  std::vector<LayerAngles> layers;

  // Throws ArgumentError when n < 1 or there are no layers.
  void validate() const;
};

// |0> (x) |D^n_{(n,0)}>
CompressedState initial_state(int n);

void apply_ua(CompressedState& state, int n, std::pair<double, double> theta);
void apply_ub_symmetric(CompressedState& state, int n, std::pair<double, double> theta);
void apply_cnot_all(CompressedState& state, int n);

CompressedState run_circuit(const CircuitParams& params);

// Coefficients in the layout used by rdm_from_params.
PurebParams circuit_coefficients(const CircuitParams& params);

// Collective J_x = sum_i X_i / 2 on Sym_n(C^2).
RealMatrix collective_jx(int n);

struct CircuitConfig {
  int layers = 5;
  OptimizerConfig optimizer;
};

struct CircuitResult {
  double ree = 0.0;
  CircuitParams params;
  int iterations = 0;
  bool converged = false;
  std::vector<double> per_restart;
};

class CircuitObjective {
 public:
  CircuitObjective(const DensityMatrix& rho, int n, int layers, const OptimizerConfig& cfg);

  // Angles flattened layer by layer; `grad` may be null.
  double value_and_gradient(const RealVector& angles, RealVector* grad) const;

  int n() const noexcept { return n_; }
  int layers() const noexcept { return layers_; }

 private:
  int n_;
  int layers_;
  ReeObjective obj_;
};

CircuitResult circuit_ree(const DensityMatrix& rho, int n, const CircuitConfig& cfg,
                          const CircuitParams* warm_start = nullptr);

// Boundary of the circuit-reachable marginals along `ray`.
PurebSearch circuit_beta_search(const Ray& ray, int n, const CircuitConfig& cfg, double epsilon = 1e-7,
                                double width = 1e-5, double lower = 0.0);

// {n, layers: [[aA, bA, aB, bB], ...]}
nlohmann::json circuit_to_json(const CircuitParams& params);
CircuitParams circuit_from_json(const nlohmann::json& j);

}  // namespace qpureb
