// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/geometry.hpp"

#include "qpureb/errors.hpp"
#include "qpureb/model_states.hpp"
#include "qpureb/parallel.hpp"
#include "qpureb/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace qpureb {

Ray::Ray(StateVector direction, Dims dims) : dir_(std::move(direction)), dims_(dims) {
  if (dims.a < 1 || dims.b < 1) throw ArgumentError("Ray: invalid dimensions");
  const int d = dims.total();
  if (dir_.d != d || dir_.vec.size() != static_cast<Eigen::Index>(d) * d - 1) {
    throw ArgumentError("Ray: direction length does not match dimensions");
  }
  const double n = dir_.vec.norm();
  if (!(n > 1e-14)) throw ArgumentError("Ray: zero direction");
  dir_.vec /= n;
  gen_ = gellmann_combination(dir_);
}

Ray Ray::from_state(const DensityMatrix& rho) { return Ray(gellmann_decompose(rho), rho.dims()); }

Ray Ray::random(Dims dims, std::uint64_t seed) {
  return from_state(random_density_matrix(dims.a, dims.b, seed));
}

ComplexMatrix Ray::point(double beta) const {
  const int d = total_dim();
  ComplexMatrix m = beta * gen_;
  m.diagonal().array() += 1.0 / d;
  return m;
}

DensityMatrix Ray::state(double beta) const { return DensityMatrix(point(beta), dims_); }

namespace {

double beta_from_generator(const ComplexMatrix& h, int d, const char* who) {
  const double lmin = min_eigenvalue(h);
  if (!(lmin < 0.0)) throw NumericalDomainError(std::string(who) + ": generator has no negative eigenvalue");
  return -1.0 / (d * lmin);
}

}  // namespace

double beta_dm(const Ray& ray) { return beta_from_generator(ray.generator(), ray.total_dim(), "beta_dm"); }

// The PPT set lies inside the state space, so the PT root is clipped at beta_dm.
double beta_ppt(const Ray& ray) {
  const double pt = beta_from_generator(partial_transpose(ray.generator(), ray.dims()), ray.total_dim(), "beta_ppt");
  return std::min(pt, beta_dm(ray));
}

// ---------------------------------------------------------------------------
// BCHA

namespace {

struct Product {
  ComplexVector a;
  ComplexVector b;
};

ComplexVector haar_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v[i] = Complex(normal(rng), normal(rng));
  return v.normalized();
}

// Rotates v by `angle` towards a random orthogonal direction.
ComplexVector perturb(const ComplexVector& v, double angle, std::mt19937_64& rng) {
  ComplexVector w = haar_vector(static_cast<int>(v.size()), rng);
  w -= v.dot(w) * v;
  const double n = w.norm();
  if (n < 1e-12) return v;
  return (std::cos(angle) * v + std::sin(angle) * (w / n)).normalized();
}

RealVector product_coordinates(const Product& p) {
  const ComplexVector psi = kron(p.a, p.b);
  return gellmann_decompose(ComplexMatrix(psi * psi.adjoint())).vec;
}

ComplexVector min_eigenvector(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  return solver.eigenvectors().col(0);
}

// Local minimum of <ab|W|ab> by alternating minimization.
Product seesaw(const ComplexMatrix& w, Dims dims, std::mt19937_64& rng) {
  Product p{haar_vector(dims.a, rng), haar_vector(dims.b, rng)};
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50; ++it) {
    ComplexMatrix wa = ComplexMatrix::Zero(dims.a, dims.a);
    for (int i = 0; i < dims.a; ++i)
      for (int j = 0; j < dims.a; ++j)
        wa(i, j) = p.b.dot(w.block(i * dims.b, j * dims.b, dims.b, dims.b) * p.b);
    p.a = min_eigenvector(wa);
    ComplexMatrix wb = ComplexMatrix::Zero(dims.b, dims.b);
    for (int i = 0; i < dims.a; ++i)
      for (int j = 0; j < dims.a; ++j) wb += std::conj(p.a[i]) * p.a[j] * w.block(i * dims.b, j * dims.b, dims.b, dims.b);
    p.b = min_eigenvector(wb);
    const double value = p.b.dot(wb * p.b).real();
    if (std::abs(last - value) < 1e-13) break;
    last = value;
  }
  return p;
}

}  // namespace

ChaResult beta_cha_detailed(const Ray& ray, const ChaConfig& cfg) {
  const Dims dims = ray.dims();
  const int d = dims.total();
  const Eigen::Index m = static_cast<Eigen::Index>(d) * d - 1;
  if (cfg.n_states < d * d) throw ArgumentError("beta_cha: n_states must be at least (d_A d_B)^2");
  if (cfg.bagging_rounds < 1) throw ArgumentError("beta_cha: bagging_rounds must be at least 1");

  std::mt19937_64 rng(cfg.seed);
  std::vector<Product> pool;
  // Computational-basis products keep the origin feasible.
  for (int i = 0; i < dims.a; ++i) {
    for (int j = 0; j < dims.b; ++j) {
      pool.push_back({ComplexVector::Unit(dims.a, i), ComplexVector::Unit(dims.b, j)});
    }
  }
  while (static_cast<int>(pool.size()) < cfg.n_states) pool.push_back({haar_vector(dims.a, rng), haar_vector(dims.b, rng)});

  ChaResult result;
  std::vector<int> warm;
  for (int round = 0; round < cfg.bagging_rounds; ++round) {
    const Eigen::Index n = static_cast<Eigen::Index>(pool.size());
    RealMatrix a = RealMatrix::Zero(m + 1, n + 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      a.col(j).head(m) = product_coordinates(pool[j]);
      a(m, j) = 1.0;
    }
    a.col(n).head(m) = -ray.direction().vec;
    RealVector b = RealVector::Zero(m + 1);
    b[m] = 1.0;
    RealVector c = RealVector::Zero(n + 1);
    c[n] = 1.0;
    // The previous basis is listed first in the pool, with beta at column n.
    for (int& j : warm)
      if (j < 0) j = static_cast<int>(n);

    SimplexOptions lp_opts;
    lp_opts.perturbation_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(round));
    const LpResult lp = simplex_maximize(a, b, c, lp_opts, warm.empty() ? nullptr : &warm);
    if (lp.status != LpStatus::optimal) {
      if (round == 0) throw NumericalDomainError("beta_cha: LP failed (" + to_string(lp.status) + ")");
      result.per_round.push_back(result.beta);
      warm.clear();
      continue;
    }
    result.beta = std::max(result.beta, lp.x[n]);
    result.per_round.push_back(result.beta);
    result.support = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (lp.x[j] > 1e-9) ++result.support;
    if (round + 1 == cfg.bagging_rounds) break;

    // Keep the basic columns (which include the support) and remember where
    // they land in the next pool; -1 marks beta.
    std::vector<Product> next;
    std::vector<char> in_support;
    warm.clear();
    bool usable = true;
    for (int j : lp.basis) {
      if (j < n) {
        warm.push_back(static_cast<int>(next.size()));
        next.push_back(pool[j]);
        in_support.push_back(lp.x[j] > 1e-9);
      } else if (j == n) {
        warm.push_back(-1);
      } else {
        usable = false;
      }
    }
    if (!usable) warm.clear();
    const std::size_t kept = next.size();

    // Products minimizing the dual witness would enter the basis.
    StateVector y{lp.dual.head(m), d};
    const ComplexMatrix w = gellmann_combination(y) / 2.0;
    for (int s = 0; s < cfg.pricing_starts; ++s) next.push_back(seesaw(w, dims, rng));
    for (std::size_t i = 0; i < kept && static_cast<int>(next.size()) < cfg.n_states; ++i) {
      if (!in_support[i]) continue;
      for (int r = 0; r < 2 && static_cast<int>(next.size()) < cfg.n_states; ++r) {
        next.push_back({perturb(next[i].a, cfg.perturbation, rng), perturb(next[i].b, cfg.perturbation, rng)});
      }
    }
    while (static_cast<int>(next.size()) < cfg.n_states) next.push_back({haar_vector(dims.a, rng), haar_vector(dims.b, rng)});
    pool = std::move(next);
  }
  return result;
}

double beta_cha(const Ray& ray, const ChaConfig& cfg) { return beta_cha_detailed(ray, cfg).beta; }

// ---------------------------------------------------------------------------
// PureB binary search

PurebSearch bisect_ree_boundary(const Ray& ray, double lower, double epsilon, double width,
                                const ReeEvaluator& evaluate) {
  if (!(epsilon > 0.0) || !(width > 0.0)) throw ArgumentError("boundary search: epsilon and width must be positive");
  PurebSearch out;
  const auto eval = [&](double beta, bool retry) {
    const ReeEvaluation e = evaluate(ray.state(beta), retry);
    ++out.evaluations;
    out.iterations += e.iterations;
    return e.ree;
  };

  double hi = beta_dm(ray);
  double lo = std::clamp(lower, 0.0, hi);
  out.outside = hi;
  out.inside = lo;

  if (lo > 0.0) {
    double ree = eval(lo, false);
    if (ree > epsilon) ree = eval(lo, true);
    if (ree > epsilon) {
      out.flagged = true;
      out.note = "lower bracket tests outside; searching [0, lower]";
      out.outside = lo;
      out.ree_outside = ree;
      hi = lo;
      lo = 0.0;
      out.inside = 0.0;
    } else {
      out.ree_inside = ree;
    }
  }

  bool saw_outside = out.flagged;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    const double ree = eval(mid, false);
    if (ree > epsilon) {
      hi = mid;
      out.outside = mid;
      out.ree_outside = ree;
      saw_outside = true;
    } else {
      lo = mid;
      out.inside = mid;
      out.ree_inside = ree;
    }
  }
  if (!saw_outside) {
    out.note = "no outside point found below beta_dm";
    out.beta = out.outside;
    return out;
  }
  out.beta = out.flagged ? hi : 0.5 * (lo + hi);
  return out;
}

PurebSearch beta_pureb_search(const Ray& ray, int k, const PurebSearchConfig& cfg, std::optional<double> lower) {
  if (k < 1) throw ArgumentError("beta_pureb: k must be at least 1");
  const auto bt = cached_b_tensor(k, ray.dims().b);
  OptimizerConfig opt = cfg.optimizer;
  opt.stop_below = cfg.epsilon;
  OptimizerConfig retry = opt;
  retry.restarts = opt.restarts * cfg.retry_factor;
  retry.seed = mix_seed(opt.seed, 0x5eed);

  std::optional<PurebParams> warm;
  const ReeEvaluator evaluate = [&](const DensityMatrix& rho, bool is_retry) {
    const OptimizerResult r = minimize_ree(rho, bt, is_retry ? retry : opt, warm ? &*warm : nullptr);
    warm = r.params;
    return ReeEvaluation{r.ree, r.iterations};
  };
  return bisect_ree_boundary(ray, lower.value_or(0.0), cfg.epsilon, cfg.width, evaluate);
}

double beta_pureb(const Ray& ray, int k, const PurebSearchConfig& cfg, std::optional<double> lower) {
  return beta_pureb_search(ray, k, cfg, lower).beta;
}

// ---------------------------------------------------------------------------
// Composite drivers

std::string to_string(Method m) {
  switch (m) {
    case Method::dm: return "dm";
    case Method::ppt: return "ppt";
    case Method::cha: return "cha";
    case Method::pureb: return "pureb";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "dm") return Method::dm;
  if (name == "ppt") return Method::ppt;
  if (name == "cha") return Method::cha;
  if (name == "pureb") return Method::pureb;
  throw ArgumentError("unknown method '" + name + "' (expected dm, ppt, cha or pureb)");
}

bool BoundaryConfig::has(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

BoundaryResult boundary(const Ray& ray, const BoundaryConfig& cfg) {
  BoundaryResult out{ray, 0.0, 0.0, std::nullopt, {}};
  out.beta_dm = beta_dm(ray);
  out.beta_ppt = beta_ppt(ray);
  if (cfg.has(Method::cha)) out.beta_cha = beta_cha(ray, cfg.cha);
  if (cfg.has(Method::pureb)) {
    for (int k : cfg.k_list) out.beta_pureb.emplace(k, beta_pureb_search(ray, k, cfg.pureb, out.beta_cha));
  }
  return out;
}

std::vector<Ray> plane_rays(const DensityMatrix& v1, const DensityMatrix& v2, int resolution) {
  if (resolution < 1) throw ArgumentError("plane_scan: resolution must be at least 1");
  if (!(v1.dims() == v2.dims())) throw ArgumentError("plane_scan: states have different dimensions");
  const StateVector s1 = gellmann_decompose(v1);
  const StateVector s2 = gellmann_decompose(v2);
  const double n1 = s1.vec.norm(), n2 = s2.vec.norm();
  if (n1 < 1e-12 || n2 < 1e-12) throw ArgumentError("plane_scan: state coincides with the maximally mixed state");
  const RealVector e1 = s1.vec / n1;
  RealVector e2 = s2.vec / n2;
  e2 -= e1.dot(e2) * e1;
  if (e2.norm() < std::sin(1e-6)) throw ArgumentError("plane_scan: directions are collinear");
  e2.normalize();
  std::vector<Ray> rays;
  rays.reserve(resolution);
  for (int j = 0; j < resolution; ++j) {
    const double t = 2.0 * std::numbers::pi * j / resolution;
    rays.emplace_back(StateVector{std::cos(t) * e1 + std::sin(t) * e2, s1.d}, v1.dims());
  }
  return rays;
}

std::vector<BoundaryResult> plane_scan(const DensityMatrix& v1, const DensityMatrix& v2, int resolution,
                                       const BoundaryConfig& cfg, int threads) {
  const std::vector<Ray> rays = plane_rays(v1, v2, resolution);
  std::vector<std::optional<BoundaryResult>> slots =
      parallel_map(rays.size(), [&](std::size_t i) { return std::optional<BoundaryResult>(boundary(rays[i], cfg)); }, threads);
  std::vector<BoundaryResult> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

GapSurvey gap_survey(int n_samples, Dims dims, std::uint64_t seed, const ChaConfig& cha, int threads) {
  if (n_samples < 1) throw ArgumentError("gap_survey: n_samples must be at least 1");
  GapSurvey out;
  out.samples = parallel_map(
      static_cast<std::size_t>(n_samples),
      [&](std::size_t i) {
        const Ray ray = Ray::random(dims, mix_seed(seed, i));
        ChaConfig c = cha;
        c.seed = mix_seed(cha.seed, i);
        GapSample s;
        s.beta_ppt = beta_ppt(ray);
        s.beta_cha = beta_cha(ray, c);
        s.gap = s.beta_ppt - s.beta_cha;
        return s;
      },
      threads);
  std::vector<double> gaps;
  for (const auto& s : out.samples) gaps.push_back(s.gap);
  std::sort(gaps.begin(), gaps.end());
  const std::size_t n = gaps.size();
  out.median = n % 2 ? gaps[n / 2] : 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]);
  out.min = gaps.front();
  out.max = gaps.back();
  return out;
}

BetaReference read_beta_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference file '" + path + "'");
  BetaReference ref;
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("direction_id", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string id, k, beta;
    if (!std::getline(ss, id, ',') || !std::getline(ss, k, ',') || !std::getline(ss, beta, ',')) {
      throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected direction_id,k,beta");
    }
    try {
      ref[{id, std::stoi(k)}] = std::stod(beta);
    } catch (const std::exception&) {
      throw ArgumentError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return ref;
}

Ray ray_for_id(const std::string& id, Dims dims, std::uint64_t seed) {
  const auto colon = id.find(':');
  if (colon != std::string::npos) {
    const std::string family = id.substr(0, colon);
    const int d = std::stoi(id.substr(colon + 1));
    if (family == "werner") return Ray::from_state(werner(d, 1.0));
    if (family == "isotropic") return Ray::from_state(isotropic(d, 1.0));
    throw ArgumentError("unknown direction family '" + family + "'");
  }
  std::size_t pos = 0;
  const unsigned long index = std::stoul(id, &pos);
  if (pos != id.size()) throw ArgumentError("malformed direction id '" + id + "'");
  return Ray::random(dims, mix_seed(seed, index));
}

std::vector<KextErrorRow> random_direction_kext_error(const KextErrorConfig& cfg, const BetaReference* reference,
                                                      int threads) {
  struct Task {
    std::string id;
    int k;
    std::optional<double> ref;
  };
  std::vector<Task> tasks;
  if (reference) {
    for (const auto& [key, beta] : *reference) tasks.push_back({key.first, key.second, beta});
  } else {
    if (cfg.n_samples < 1) throw ArgumentError("kext_error: n_samples must be at least 1");
    for (int i = 0; i < cfg.n_samples; ++i)
      for (int k : cfg.k_list) tasks.push_back({std::to_string(i), k, std::nullopt});
  }
  return parallel_map(
      tasks.size(),
      [&](std::size_t t) {
        const Task& task = tasks[t];
        const Ray ray = ray_for_id(task.id, cfg.dims, cfg.seed);
        KextErrorRow row{task.id, task.k};
        row.beta = beta_pureb(ray, task.k, cfg.pureb);
        row.reference = task.ref ? *task.ref : beta_pureb(ray, 4 * task.k, cfg.pureb);
        row.relative_error = std::abs(row.beta - row.reference) / row.reference;
        return row;
      },
      threads);
}

namespace {

double invert_alpha(const std::function<double(double)>& to_beta, double beta) {
  if (!(beta >= 0.0) || beta > to_beta(1.0) + 1e-12) throw ArgumentError("beta lies outside the family's range");
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (to_beta(mid) < beta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double werner_alpha_to_beta(int d, double alpha) { return gellmann_decompose(werner(d, alpha)).norm(); }

double werner_beta_to_alpha(int d, double beta) {
  return invert_alpha([d](double a) { return werner_alpha_to_beta(d, a); }, beta);
}

double isotropic_alpha_to_beta(int d, double alpha) { return gellmann_decompose(isotropic(d, alpha)).norm(); }

double isotropic_beta_to_alpha(int d, double beta) {
  return invert_alpha([d](double a) { return isotropic_alpha_to_beta(d, a); }, beta);
}

}  // namespace qpureb
