// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/pureb.hpp"

#include "qpureb/errors.hpp"
#include "qpureb/kernels.hpp"
#include "qpureb/lbfgs.hpp"
#include "qpureb/parallel.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace qpureb {

std::string to_string(LogBackend backend) { return backend == LogBackend::eigen ? "eigen" : "pade"; }

LogBackend log_backend_from_string(const std::string& name) {
  if (name == "eigen") return LogBackend::eigen;
  if (name == "pade") return LogBackend::pade;
  throw ArgumentError("unknown log backend '" + name + "' (expected eigen or pade)");
}

void OptimizerConfig::validate() const {
  if (!(tolerance > 0.0)) throw ArgumentError("OptimizerConfig: tolerance must be positive");
  if (restarts < 1) throw ArgumentError("OptimizerConfig: restarts must be at least 1");
  if (max_iters < 1) throw ArgumentError("OptimizerConfig: max_iters must be at least 1");
  if (!(floor > 0.0)) throw ArgumentError("OptimizerConfig: floor must be positive");
  if (pade_nodes < 1 || pade_roots < 0) throw ArgumentError("OptimizerConfig: invalid Pade parameters");
  if (lbfgs_memory < 1) throw ArgumentError("OptimizerConfig: lbfgs_memory must be at least 1");
}

std::shared_ptr<const BTensor> cached_b_tensor(int n, int d_b) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const BTensor>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, d_b}];
  if (!slot) slot = std::make_shared<const BTensor>(n, d_b);
  return slot;
}

ReeObjective::ReeObjective(const DensityMatrix& rho, std::shared_ptr<const BTensor> bt,
                           const OptimizerConfig& cfg)
    : rho_(rho), bt_(std::move(bt)), cfg_(cfg), entropy_term_(entropy_term(rho.matrix())) {
  cfg_.validate();
  if (!bt_) throw ArgumentError("ReeObjective: missing marginal tensor");
  if (bt_->d() != rho.dims().b) throw ArgumentError("ReeObjective: tensor d_B does not match the state");
}

std::size_t ReeObjective::parameter_count() const noexcept {
  return static_cast<std::size_t>(d_a()) * bt_->basis().size();
}

double ReeObjective::value_of_marginal(const ComplexMatrix& sigma, ComplexMatrix* sensitivity) const {
  const ComplexMatrix& rho = rho_.matrix();
  double cross = 0.0;
  if (cfg_.backend == LogBackend::eigen) {
    // Structurally zero eigenvalues come back as roundoff of either sign; clamp
    // them all to one level so the objective stays smooth. Tr sigma = 1 keeps
    // the level independent of p.
    const double floor =
        std::max(cfg_.floor, kRoundoffFloorScale * static_cast<double>(sigma.rows()) *
                                 std::numeric_limits<double>::epsilon());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(sigma));
    const Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
    const ComplexMatrix rt = s.vectors.adjoint() * rho * s.vectors;
    for (Eigen::Index a = 0; a < s.values.size(); ++a) {
      cross += std::log(std::max(s.values[a], floor)) * rt(a, a).real();
    }
    if (sensitivity) {
      ComplexMatrix t = rt;
      for (Eigen::Index a = 0; a < t.rows(); ++a)
        for (Eigen::Index b = 0; b < t.cols(); ++b)
          t(a, b) *= log_divided_difference(s.values[a], s.values[b], floor);
      *sensitivity = -(s.vectors * t * s.vectors.adjoint());
    }
  } else {
    // The rational form needs a positive definite argument; marginals of pure
    // extensions are often rank deficient.
    ComplexMatrix shifted = hermitian_part(sigma);
    shifted.diagonal().array() += std::max(cfg_.floor, kPadeShift);
    const ComplexMatrix log_sigma = matrix_log_pade(shifted, cfg_.pade_nodes, cfg_.pade_roots);
    cross = (rho * log_sigma).trace().real();
    if (sensitivity) {
      *sensitivity = -log_frechet_pade(shifted, rho, cfg_.pade_nodes, cfg_.pade_roots);
    }
  }
  return entropy_term_ - cross;
}

double ReeObjective::value(std::span<const Complex> raw) const {
  if (raw.size() != parameter_count()) throw ArgumentError("ReeObjective: parameter count mismatch");
  double r2 = 0.0;
  for (const auto& z : raw) r2 += std::norm(z);
  if (!(r2 > 0.0)) throw NumericalDomainError("ReeObjective: zero coefficient vector");
  ComplexMatrix sigma;
  kernels::marginal(*bt_, d_a(), raw, sigma);
  sigma /= r2;
  return value_of_marginal(sigma, nullptr);
}

double ReeObjective::value_and_state_gradient(std::span<const Complex> p, std::span<Complex> grad) const {
  if (p.size() != parameter_count() || grad.size() != p.size()) {
    throw ArgumentError("ReeObjective: parameter count mismatch");
  }
  ComplexMatrix sigma;
  kernels::marginal(*bt_, d_a(), p, sigma);
  ComplexMatrix m;
  const double f = value_of_marginal(sigma, &m);
  std::fill(grad.begin(), grad.end(), Complex(0.0));
  kernels::pullback(*bt_, d_a(), p, m, grad);
  return f;
}

double ReeObjective::value_and_gradient(std::span<const Complex> raw, std::span<Complex> grad) const {
  if (raw.size() != parameter_count() || grad.size() != raw.size()) {
    throw ArgumentError("ReeObjective: parameter count mismatch");
  }
  double r2 = 0.0;
  for (const auto& z : raw) r2 += std::norm(z);
  if (!(r2 > 0.0)) throw NumericalDomainError("ReeObjective: zero coefficient vector");
  const double r = std::sqrt(r2);
  std::vector<Complex> p(raw.begin(), raw.end());
  for (auto& z : p) z /= r;
  const double f = value_and_state_gradient(p, grad);
  // p = p~/r:  dE/dp~ = (g - p Re<p, g>) / r
  double proj = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) proj += (std::conj(p[i]) * grad[i]).real();
  for (std::size_t i = 0; i < p.size(); ++i) grad[i] = (grad[i] - proj * p[i]) / r;
  return f;
}

namespace {

// Non-owning alias; the caller keeps `bt` alive for the duration of the call.
std::shared_ptr<const BTensor> borrow(const BTensor& bt) {
  return std::shared_ptr<const BTensor>(std::shared_ptr<const BTensor>{}, &bt);
}

void check_params(const PurebParams& p, const DensityMatrix& rho, const BTensor& bt) {
  if (p.d_a() != rho.dims().a || p.d_b() != rho.dims().b || p.d_b() != bt.d() || p.n() != bt.n()) {
    throw ArgumentError("pureb: parameters, state and tensor dimensions disagree");
  }
}

RealVector as_real(std::span<const Complex> z) {
  RealVector x(2 * static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    x[2 * i] = z[i].real();
    x[2 * i + 1] = z[i].imag();
  }
  return x;
}

std::vector<Complex> as_complex(const RealVector& x) {
  std::vector<Complex> z(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = Complex(x[2 * i], x[2 * i + 1]);
  return z;
}

}  // namespace

double objective(const PurebParams& p, const DensityMatrix& rho, const BTensor& bt,
                 const OptimizerConfig& cfg) {
  check_params(p, rho, bt);
  return ReeObjective(rho, borrow(bt), cfg).value(p.raw());
}

std::vector<Complex> gradient(const PurebParams& p, const DensityMatrix& rho, const BTensor& bt,
                              const OptimizerConfig& cfg) {
  check_params(p, rho, bt);
  std::vector<Complex> g(p.size());
  ReeObjective(rho, borrow(bt), cfg).value_and_gradient(p.raw(), g);
  return g;
}

OptimizerResult minimize_ree(const DensityMatrix& rho, int n, const OptimizerConfig& cfg) {
  if (n < 1) throw ArgumentError("minimize_ree: extension count must be at least 1");
  return minimize_ree(rho, cached_b_tensor(n, rho.dims().b), cfg, nullptr);
}

OptimizerResult minimize_ree(const DensityMatrix& rho, std::shared_ptr<const BTensor> bt,
                             const OptimizerConfig& cfg, const PurebParams* warm_start) {
  cfg.validate();
  const ReeObjective obj(rho, bt, cfg);
  const int d_a = rho.dims().a, d_b = rho.dims().b, n = bt->n();
  if (warm_start && (warm_start->d_a() != d_a || warm_start->d_b() != d_b || warm_start->n() != n)) {
    throw ArgumentError("minimize_ree: warm start has mismatched dimensions");
  }

  LbfgsOptions opts;
  opts.memory = cfg.lbfgs_memory;
  opts.max_iters = cfg.max_iters;
  opts.ftol = cfg.tolerance;
  if (cfg.stop_below > 0.0) opts.stop_below = cfg.stop_below;

  const std::size_t count = obj.parameter_count();
  std::vector<Complex> grad(count);
  const LbfgsObjective fun = [&](const RealVector& x, RealVector& g) {
    const std::vector<Complex> raw = as_complex(x);
    const double f = obj.value_and_gradient(raw, grad);
    for (std::size_t i = 0; i < count; ++i) {
      g[2 * i] = grad[i].real();
      g[2 * i + 1] = grad[i].imag();
    }
    return f;
  };

  OptimizerResult result;
  result.ree = std::numeric_limits<double>::infinity();
  bool best_converged = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    PurebParams init = (r == 0 && warm_start) ? *warm_start
                                              : PurebParams::random(d_a, d_b, n, mix_seed(cfg.seed, r));
    const double norm = init.norm();
    for (auto& z : init.raw()) z /= norm;
    const LbfgsResult run = lbfgs_minimize(fun, as_real(init.raw()), opts);
    result.iterations += run.iterations;
    result.per_restart.push_back(run.f);
    ++result.restarts_used;
    if (run.f < result.ree || result.per_restart.size() == 1) {
      result.ree = run.f;
      std::vector<Complex> raw = as_complex(run.x);
      double rn = 0.0;
      for (const auto& z : raw) rn += std::norm(z);
      rn = std::sqrt(rn);
      for (auto& z : raw) z /= rn;
      result.params = PurebParams(d_a, d_b, n, std::move(raw));
      best_converged = run.converged;
    }
    if (cfg.stop_below > 0.0 && result.ree <= cfg.stop_below) break;
  }
  result.converged = best_converged;
  return result;
}

std::vector<CurvePoint> ree_curve(const StateFamily& family, std::span<const double> alphas, int n,
                                  const OptimizerConfig& cfg, bool warm_start, int threads) {
  std::vector<CurvePoint> out;
  if (alphas.empty()) return out;
  std::shared_ptr<const BTensor> bt;
  {
    const DensityMatrix first = family(alphas.front());
    bt = cached_b_tensor(n, first.dims().b);
  }
  if (warm_start) {
    std::optional<PurebParams> previous;
    for (double alpha : alphas) {
      const OptimizerResult res = minimize_ree(family(alpha), bt, cfg, previous ? &*previous : nullptr);
      out.push_back({alpha, res.ree, res.converged});
      previous = res.params;
    }
    return out;
  }
  return parallel_map(
      alphas.size(),
      [&](std::size_t i) {
        const OptimizerResult res = minimize_ree(family(alphas[i]), bt, cfg, nullptr);
        return CurvePoint{alphas[i], res.ree, res.converged};
      },
      threads);
}

nlohmann::json checkpoint_json(const OptimizerResult& result, const OptimizerConfig& cfg) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (const auto& z : result.params.raw()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"d_a", result.params.d_a()},
          {"d_b", result.params.d_b()},
          {"n", result.params.n()},
          {"raw_re", std::move(re)},
          {"raw_im", std::move(im)},
          {"objective", result.ree},
          {"seed", cfg.seed},
          {"backend", to_string(cfg.backend)}};
}

PurebParams params_from_checkpoint(const nlohmann::json& j) {
  try {
    const auto& re = j.at("raw_re");
    const auto& im = j.at("raw_im");
    if (!re.is_array() || !im.is_array() || re.size() != im.size()) {
      throw ArgumentError("checkpoint: raw_re and raw_im must be arrays of equal length");
    }
    std::vector<Complex> raw(re.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = Complex(re[i].get<double>(), im[i].get<double>());
    return PurebParams(j.at("d_a").get<int>(), j.at("d_b").get<int>(), j.at("n").get<int>(), std::move(raw));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace qpureb
