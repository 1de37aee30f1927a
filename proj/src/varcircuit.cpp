// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/varcircuit.hpp"

#include "qpureb/errors.hpp"
#include "qpureb/lbfgs.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

namespace qpureb {

namespace {

constexpr double kPi = std::numbers::pi;

struct JxSpectrum {
  RealVector values;
  RealMatrix vectors;
};

std::shared_ptr<const JxSpectrum> jx_spectrum(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const JxSpectrum>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(collective_jx(n));
    slot = std::make_shared<const JxSpectrum>(JxSpectrum{solver.eigenvalues(), solver.eigenvectors()});
  }
  return slot;
}

void require_state(const CompressedState& state, int n) {
  if (n < 1) throw ArgumentError("varcircuit: n must be at least 1");
  if (state.size() != 2 * (n + 1)) throw ArgumentError("varcircuit: state length must be 2 (n + 1)");
}

// Gates as functions of one angle t; each satisfies dG/dt = i pi K G.
enum class Gate { z_a, x_a, cnot, z_b, x_b };

void apply_gate(Gate g, double t, CompressedState& s, int n) {
  const Eigen::Index m = n + 1;
  switch (g) {
    case Gate::z_a:
      s.segment(m, m) *= std::polar(1.0, kPi * t);
      break;
    case Gate::x_a: {
      const Complex e = std::polar(1.0, kPi * t);
      const Complex c0 = 0.5 * (1.0 + e), c1 = 0.5 * (1.0 - e);
      const ComplexVector top = s.head(m);
      s.head(m) = c0 * top + c1 * s.segment(m, m);
      s.segment(m, m) = c1 * top + c0 * s.segment(m, m);
      break;
    }
    case Gate::cnot:
      s.segment(m, m).reverseInPlace();
      break;
    case Gate::z_b:
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k <= n; ++k) s[a * m + k] *= std::polar(1.0, kPi * t * k);
      break;
    case Gate::x_b: {
      const auto spec = jx_spectrum(n);
      ComplexVector phase(m);
      for (Eigen::Index i = 0; i < m; ++i) phase[i] = std::polar(1.0, kPi * t * (0.5 * n - spec->values[i]));
      for (int a = 0; a < 2; ++a) {
        ComplexVector block = spec->vectors.transpose().cast<Complex>() * s.segment(a * m, m);
        block = block.cwiseProduct(phase);
        s.segment(a * m, m) = spec->vectors.cast<Complex>() * block;
      }
      break;
    }
  }
}

// K s for the generator of gate g.
ComplexVector apply_generator(Gate g, const CompressedState& s, int n) {
  const Eigen::Index m = n + 1;
  ComplexVector out = ComplexVector::Zero(s.size());
  switch (g) {
    case Gate::z_a:
      out.segment(m, m) = s.segment(m, m);
      break;
    case Gate::x_a:
      out.head(m) = 0.5 * (s.head(m) - s.segment(m, m));
      out.segment(m, m) = 0.5 * (s.segment(m, m) - s.head(m));
      break;
    case Gate::cnot:
      break;
    case Gate::z_b:
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k <= n; ++k) out[a * m + k] = static_cast<double>(k) * s[a * m + k];
      break;
    case Gate::x_b: {
      const RealMatrix jx = collective_jx(n);
      for (int a = 0; a < 2; ++a) {
        out.segment(a * m, m) = 0.5 * n * s.segment(a * m, m) - jx.cast<Complex>() * s.segment(a * m, m);
      }
      break;
    }
  }
  return out;
}

struct Step {
  Gate gate;
  int param;  // index into the flat angle vector, -1 for CNOT
};

std::vector<Step> schedule(int layers) {
  std::vector<Step> steps;
  for (int l = 0; l < layers; ++l) {
    steps.push_back({Gate::z_a, 4 * l + 1});
    steps.push_back({Gate::x_a, 4 * l + 0});
    steps.push_back({Gate::cnot, -1});
    steps.push_back({Gate::z_b, 4 * l + 3});
    steps.push_back({Gate::x_b, 4 * l + 2});
  }
  return steps;
}

RealVector flatten(const CircuitParams& p) {
  RealVector x(4 * static_cast<Eigen::Index>(p.layers.size()));
  for (std::size_t l = 0; l < p.layers.size(); ++l)
    for (int j = 0; j < 4; ++j) x[4 * l + j] = p.layers[l][j];
  return x;
}

CircuitParams unflatten(const RealVector& x, int n) {
  CircuitParams p{n, {}};
  for (Eigen::Index l = 0; l < x.size() / 4; ++l) p.layers.push_back({x[4 * l], x[4 * l + 1], x[4 * l + 2], x[4 * l + 3]});
  return p;
}

}  // namespace

void CircuitParams::validate() const {
  if (n < 1) throw ArgumentError("CircuitParams: n must be at least 1");
  if (layers.empty()) throw ArgumentError("CircuitParams: at least one layer is required");
}

RealMatrix collective_jx(int n) {
  if (n < 1) throw ArgumentError("collective_jx: n must be at least 1");
  RealMatrix jx = RealMatrix::Zero(n + 1, n + 1);
  for (int k = 0; k < n; ++k) {
    const double v = 0.5 * std::sqrt(static_cast<double>(k + 1) * (n - k));
    jx(k + 1, k) = v;
    jx(k, k + 1) = v;
  }
  return jx;
}

CompressedState initial_state(int n) {
  if (n < 1) throw ArgumentError("initial_state: n must be at least 1");
  CompressedState s = CompressedState::Zero(2 * (n + 1));
  s[0] = 1.0;
  return s;
}

void apply_ua(CompressedState& state, int n, std::pair<double, double> theta) {
  require_state(state, n);
  apply_gate(Gate::z_a, theta.second, state, n);
  apply_gate(Gate::x_a, theta.first, state, n);
}

void apply_ub_symmetric(CompressedState& state, int n, std::pair<double, double> theta) {
  require_state(state, n);
  apply_gate(Gate::z_b, theta.second, state, n);
  apply_gate(Gate::x_b, theta.first, state, n);
}

void apply_cnot_all(CompressedState& state, int n) {
  require_state(state, n);
  apply_gate(Gate::cnot, 0.0, state, n);
}

CompressedState run_circuit(const CircuitParams& params) {
  params.validate();
  CompressedState s = initial_state(params.n);
  for (const auto& layer : params.layers) {
    apply_ua(s, params.n, {layer[0], layer[1]});
    apply_cnot_all(s, params.n);
    apply_ub_symmetric(s, params.n, {layer[2], layer[3]});
  }
  return s;
}

PurebParams circuit_coefficients(const CircuitParams& params) {
  const CompressedState s = run_circuit(params);
  return PurebParams(2, 2, params.n, std::vector<Complex>(s.data(), s.data() + s.size()));
}

CircuitObjective::CircuitObjective(const DensityMatrix& rho, int n, int layers, const OptimizerConfig& cfg)
    : n_(n), layers_(layers), obj_(rho, cached_b_tensor(n, 2), cfg) {
  if (rho.dims().a != 2 || rho.dims().b != 2) throw ArgumentError("varcircuit: only qubit A and B are supported");
  if (n < 1 || layers < 1) throw ArgumentError("varcircuit: n and layers must be at least 1");
}

double CircuitObjective::value_and_gradient(const RealVector& angles, RealVector* grad) const {
  if (angles.size() != 4 * layers_) throw ArgumentError("CircuitObjective: expected 4 angles per layer");
  const std::vector<Step> steps = schedule(layers_);
  std::vector<CompressedState> after;
  after.reserve(steps.size());
  CompressedState s = initial_state(n_);
  for (const Step& st : steps) {
    apply_gate(st.gate, st.param >= 0 ? angles[st.param] : 0.0, s, n_);
    after.push_back(s);
  }
  std::vector<Complex> g(static_cast<std::size_t>(s.size()));
  const double f = obj_.value_and_state_gradient(std::span<const Complex>(s.data(), s.size()), g);
  if (!grad) return f;

  grad->setZero(angles.size());
  CompressedState lambda = Eigen::Map<const ComplexVector>(g.data(), s.size());
  for (std::size_t j = steps.size(); j-- > 0;) {
    const Step& st = steps[j];
    if (st.param >= 0) {
      // df/dt = Re <lambda, i pi K psi_j>
      const ComplexVector k = apply_generator(st.gate, after[j], n_);
      (*grad)[st.param] += (lambda.dot(Complex(0.0, kPi) * k)).real();
      apply_gate(st.gate, -angles[st.param], lambda, n_);
    } else {
      apply_gate(st.gate, 0.0, lambda, n_);
    }
  }
  return f;
}

CircuitResult circuit_ree(const DensityMatrix& rho, int n, const CircuitConfig& cfg, const CircuitParams* warm_start) {
  cfg.optimizer.validate();
  if (cfg.layers < 1) throw ArgumentError("circuit_ree: at least one layer is required");
  if (warm_start && (warm_start->n != n || static_cast<int>(warm_start->layers.size()) != cfg.layers)) {
    throw ArgumentError("circuit_ree: warm start has a different shape");
  }
  const CircuitObjective obj(rho, n, cfg.layers, cfg.optimizer);
  LbfgsOptions opts;
  opts.memory = cfg.optimizer.lbfgs_memory;
  opts.max_iters = cfg.optimizer.max_iters;
  opts.ftol = cfg.optimizer.tolerance;
  if (cfg.optimizer.stop_below > 0.0) opts.stop_below = cfg.optimizer.stop_below;
  const LbfgsObjective fun = [&](const RealVector& x, RealVector& g) { return obj.value_and_gradient(x, &g); };

  CircuitResult result;
  result.ree = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.optimizer.restarts; ++r) {
    RealVector x0(4 * cfg.layers);
    if (r == 0 && warm_start) {
      x0 = flatten(*warm_start);
    } else {
      std::mt19937_64 rng(mix_seed(cfg.optimizer.seed, static_cast<std::uint64_t>(r)));
      std::uniform_real_distribution<double> u(0.0, 2.0);
      for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = u(rng);
    }
    const LbfgsResult run = lbfgs_minimize(fun, x0, opts);
    result.iterations += run.iterations;
    result.per_restart.push_back(run.f);
    if (run.f < result.ree) {
      result.ree = run.f;
      result.params = unflatten(run.x, n);
      result.converged = run.converged;
    }
    if (cfg.optimizer.stop_below > 0.0 && result.ree <= cfg.optimizer.stop_below) break;
  }
  return result;
}

PurebSearch circuit_beta_search(const Ray& ray, int n, const CircuitConfig& cfg, double epsilon, double width,
                                double lower) {
  CircuitConfig base = cfg;
  base.optimizer.stop_below = epsilon;
  CircuitConfig retry = base;
  retry.optimizer.restarts *= 3;
  retry.optimizer.seed = mix_seed(cfg.optimizer.seed, 0x5eed);
  std::optional<CircuitParams> warm;
  const ReeEvaluator evaluate = [&](const DensityMatrix& rho, bool is_retry) {
    const CircuitResult r = circuit_ree(rho, n, is_retry ? retry : base, warm ? &*warm : nullptr);
    warm = r.params;
    return ReeEvaluation{r.ree, r.iterations};
  };
  return bisect_ree_boundary(ray, lower, epsilon, width, evaluate);
}

nlohmann::json circuit_to_json(const CircuitParams& params) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : params.layers) layers.push_back({l[0], l[1], l[2], l[3]});
  return {{"n", params.n}, {"layers", std::move(layers)}};
}

CircuitParams circuit_from_json(const nlohmann::json& j) {
  try {
    CircuitParams p;
    p.n = j.at("n").get<int>();
    for (const auto& l : j.at("layers")) {
      if (!l.is_array() || l.size() != 4) throw ArgumentError("circuit: each layer needs four angles");
      p.layers.push_back({l[0].get<double>(), l[1].get<double>(), l[2].get<double>(), l[3].get<double>()});
    }
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("circuit: ") + e.what());
  }
}

}  // namespace qpureb
