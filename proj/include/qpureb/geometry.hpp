// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file geometry.hpp
 * @brief Boundary parameters along rays rho(beta) = I/D + beta r.lambda.
 *
 * For a unit Gell-Mann direction r the module finds where the ray leaves
 * the state space (beta_dm), the PPT set (beta_ppt), an LP inner
 * approximation of the separable set (beta_cha) and the region detected by
 * pure k-bosonic extensions (beta_pureb).
 */

#pragma once

#include "qpureb/density_matrix.hpp"
#include "qpureb/gellmann.hpp"
#include "qpureb/pureb.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qpureb {

inline constexpr double kRayNormTolerance = 1e-12;

class Ray {
 public:
  // Normalizes `direction`; throws ArgumentError if it is (numerically) zero
  // or its length does not match dims.
  Ray(StateVector direction, Dims dims);

  // Direction of rho - I/D.
  static Ray from_state(const DensityMatrix& rho);
  static Ray random(Dims dims, std::uint64_t seed);

  const StateVector& direction() const noexcept { return dir_; }
  Dims dims() const noexcept { return dims_; }
  int total_dim() const noexcept { return dims_.total(); }

  // r.lambda, the traceless Hermitian generator of the ray.
  const ComplexMatrix& generator() const noexcept { return gen_; }
  // I/D + beta r.lambda (not necessarily PSD).
  ComplexMatrix point(double beta) const;
  DensityMatrix state(double beta) const;

 private:
  StateVector dir_;
  Dims dims_;
  ComplexMatrix gen_;
};

// Closed forms: lambda_min(I/D + beta H) = 1/D + beta lambda_min(H). beta_ppt is
// capped at beta_dm.
double beta_dm(const Ray& ray);
double beta_ppt(const Ray& ray);

struct ChaConfig {
  int n_states = 200;
  int bagging_rounds = 50;
  std::uint64_t seed = 7;
  // Seesaw starts per round for the dual-guided product-state candidates.
  int pricing_starts = 8;
  double perturbation = 0.1;
};

struct ChaResult {
  double beta = 0.0;
  // Best LP value after each round (non-decreasing).
  std::vector<double> per_round;
  int support = 0;
};

ChaResult beta_cha_detailed(const Ray& ray, const ChaConfig& cfg = {});
double beta_cha(const Ray& ray, const ChaConfig& cfg = {});

struct PurebSearchConfig {
  double epsilon = 1e-7;
  double width = 1e-5;
  OptimizerConfig optimizer;
  // Restart multiplier for the retry when the lower end tests outside.
  int retry_factor = 3;
};

struct PurebSearch {
  double beta = 0.0;
  double inside = 0.0;   // last beta with REE <= epsilon
  double outside = 0.0;  // last beta with REE > epsilon
  double ree_inside = 0.0;
  double ree_outside = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool flagged = false;
  std::string note;
};

struct ReeEvaluation {
  double ree = 0.0;
  int iterations = 0;
};

// REE of a state; `retry` asks for a more thorough attempt.
using ReeEvaluator = std::function<ReeEvaluation(const DensityMatrix&, bool retry)>;

// Binary search on [lower, beta_dm(ray)] for the crossing REE = epsilon,
// down to a bracket of `width`. When `lower` itself tests outside (twice),
// the result is flagged and the search continues on [0, lower].
PurebSearch bisect_ree_boundary(const Ray& ray, double lower, double epsilon, double width,
                                const ReeEvaluator& evaluate);

// Binary search on [lower, beta_dm] for the point where the PureB(k) REE
// crosses epsilon. `lower` defaults to 0.
PurebSearch beta_pureb_search(const Ray& ray, int k, const PurebSearchConfig& cfg,
                              std::optional<double> lower = std::nullopt);
double beta_pureb(const Ray& ray, int k, const PurebSearchConfig& cfg = {},
                  std::optional<double> lower = std::nullopt);

enum class Method { dm, ppt, cha, pureb };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct BoundaryConfig {
  std::vector<Method> methods{Method::dm, Method::ppt, Method::cha, Method::pureb};
  std::vector<int> k_list{8};
  ChaConfig cha;
  PurebSearchConfig pureb;

  bool has(Method m) const;
};

struct BoundaryResult {
  Ray ray;
  double beta_dm = 0.0;
  double beta_ppt = 0.0;
  std::optional<double> beta_cha;
  std::map<int, PurebSearch> beta_pureb;
};

BoundaryResult boundary(const Ray& ray, const BoundaryConfig& cfg);

// Directions cos(theta) e1 + sin(theta) e2, theta = 2 pi j / resolution, with
// (e1, e2) orthonormalized from the Gell-Mann vectors of v1 and v2.
std::vector<Ray> plane_rays(const DensityMatrix& v1, const DensityMatrix& v2, int resolution);
std::vector<BoundaryResult> plane_scan(const DensityMatrix& v1, const DensityMatrix& v2, int resolution,
                                       const BoundaryConfig& cfg, int threads = 1);

struct GapSample {
  double beta_ppt = 0.0;
  double beta_cha = 0.0;
  double gap = 0.0;
};

struct GapSurvey {
  std::vector<GapSample> samples;
  double median = 0.0;
  double max = 0.0;
  double min = 0.0;
};

GapSurvey gap_survey(int n_samples, Dims dims, std::uint64_t seed, const ChaConfig& cha = {},
                     int threads = 1);

// Reference boundary values keyed by (direction id, k).
using BetaReference = std::map<std::pair<std::string, int>, double>;

// Rows: direction_id,k,beta
BetaReference read_beta_reference(const std::string& path);

struct KextErrorRow {
  std::string direction_id;
  int k = 0;
  double beta = 0.0;
  double reference = 0.0;
  double relative_error = 0.0;
};

struct KextErrorConfig {
  int n_samples = 10;
  std::vector<int> k_list{4, 8};
  Dims dims{2, 2};
  std::uint64_t seed = 11;
  PurebSearchConfig pureb;
};

// Ray for a direction id: "werner:d", "isotropic:d" or a sample index drawn
// from `seed`.
Ray ray_for_id(const std::string& id, Dims dims, std::uint64_t seed);

// With a reference, compares beta_pureb(k) against it for every listed
// entry; otherwise compares beta_pureb(k) with beta_pureb(4k) on random rays.
std::vector<KextErrorRow> random_direction_kext_error(const KextErrorConfig& cfg,
                                                      const BetaReference* reference = nullptr,
                                                      int threads = 1);

// Distance from I/D of the family states, and its inverse on alpha in [0, 1].
double werner_alpha_to_beta(int d, double alpha);
double werner_beta_to_alpha(int d, double beta);
double isotropic_alpha_to_beta(int d, double alpha);
double isotropic_beta_to_alpha(int d, double beta);

}  // namespace qpureb
