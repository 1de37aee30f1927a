// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/model_states.hpp"

#include "qpureb/dicke.hpp"
#include "qpureb/errors.hpp"

#include <cmath>
#include <numbers>

namespace qpureb {

namespace {

void require_dimension(int d, const char* who) {
  if (d < 2) throw ArgumentError(std::string(who) + ": local dimension must be at least 2");
}

// sum_i p_i ln(p_i / q_i) with multiplicities.
double two_outcome_kl(double p1, double q1, double m1, double p2, double q2, double m2) {
  double s = 0.0;
  if (p1 > 0.0) s += m1 * p1 * std::log(p1 / q1);
  if (p2 > 0.0) s += m2 * p2 * std::log(p2 / q2);
  return std::max(s, 0.0);
}

ComplexVector basis_vector(int d, int i) {
  ComplexVector v = ComplexVector::Zero(d);
  v[i] = 1.0;
  return v;
}

ComplexVector real_vector(std::initializer_list<double> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v.normalized();
}

int rank_of(const std::vector<ComplexVector>& vs, double tol) {
  if (vs.empty()) return 0;
  ComplexMatrix m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++r;
  return r;
}

}  // namespace

ComplexMatrix swap_operator(int d) {
  require_dimension(d, "swap_operator");
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  return f;
}

ComplexVector maximally_entangled(int d) {
  require_dimension(d, "maximally_entangled");
  ComplexVector v = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

DensityMatrix werner(int d, double alpha) {
  require_dimension(d, "werner");
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw ArgumentError("werner: alpha must lie in [-1, 1]");
  const double dd = d;
  ComplexMatrix m = ComplexMatrix::Identity(d * d, d * d) - alpha * swap_operator(d);
  m /= dd * dd - dd * alpha;
  return DensityMatrix(std::move(m), {d, d});
}

DensityMatrix isotropic(int d, double alpha) {
  require_dimension(d, "isotropic");
  const double dd = d;
  if (!(alpha >= -1.0 / (dd * dd - 1.0) - 1e-15 && alpha <= 1.0)) {
    throw ArgumentError("isotropic: alpha must lie in [-1/(d^2-1), 1]");
  }
  const ComplexVector psi = maximally_entangled(d);
  ComplexMatrix m = ComplexMatrix::Identity(d * d, d * d) * ((1.0 - alpha) / (dd * dd));
  m += alpha * psi * psi.adjoint();
  return DensityMatrix(std::move(m), {d, d});
}

double werner_ree_analytic(int d, double alpha) {
  require_dimension(d, "werner_ree_analytic");
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw ArgumentError("werner_ree_analytic: alpha must lie in [-1, 1]");
  const double dd = d;
  if (alpha < 1.0 / dd) return 0.0;
  // Eigenvalues on the symmetric (F = +1) and antisymmetric (F = -1) subspaces.
  const auto sym = [&](double a) { return (1.0 - a) / (dd * dd - dd * a); };
  const auto anti = [&](double a) { return (1.0 + a) / (dd * dd - dd * a); };
  const double q = 1.0 / dd;
  return two_outcome_kl(sym(alpha), sym(q), dd * (dd + 1.0) / 2.0, anti(alpha), anti(q), dd * (dd - 1.0) / 2.0);
}

double isotropic_ree_analytic(int d, double alpha) {
  require_dimension(d, "isotropic_ree_analytic");
  const double dd = d;
  if (alpha < 1.0 / (dd + 1.0)) return 0.0;
  if (alpha > 1.0) throw ArgumentError("isotropic_ree_analytic: alpha must be at most 1");
  const auto top = [&](double a) { return (1.0 - a) / (dd * dd) + a; };
  const auto rest = [&](double a) { return (1.0 - a) / (dd * dd); };
  const double q = 1.0 / (dd + 1.0);
  return two_outcome_kl(top(alpha), top(q), 1.0, rest(alpha), rest(q), dd * dd - 1.0);
}

UpbName upb_name_from_string(const std::string& name) {
  if (name == "tiles") return UpbName::tiles;
  if (name == "pyramid") return UpbName::pyramid;
  throw ArgumentError("unknown UPB '" + name + "' (expected tiles or pyramid)");
}

std::string to_string(UpbName name) { return name == UpbName::tiles ? "tiles" : "pyramid"; }

ComplexVector ProductVector::joint() const { return kron(a, b); }

UpbSet upb_set(UpbName name) {
  UpbSet set{name, {}};
  if (name == UpbName::tiles) {
    const ComplexVector e0 = basis_vector(3, 0), e2 = basis_vector(3, 2);
    const ComplexVector d01 = real_vector({1, -1, 0}), d12 = real_vector({0, 1, -1});
    const ComplexVector all = real_vector({1, 1, 1});
    set.vectors = {ProductVector{e0, d01}, ProductVector{e2, d12}, ProductVector{d01, e2},
                   ProductVector{d12, e0}, ProductVector{all, all}};
    return set;
  }
  const double h = 0.5 * std::sqrt(1.0 + std::sqrt(5.0));
  std::array<ComplexVector, 5> v;
  for (int j = 0; j < 5; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 5.0;
    v[j] = real_vector({std::cos(t), std::sin(t), h});
  }
  for (int j = 0; j < 5; ++j) set.vectors[j] = ProductVector{v[j], v[(2 * j) % 5]};
  return set;
}

bool is_unextendible(const UpbSet& set, double rank_tolerance) {
  const int count = static_cast<int>(set.vectors.size());
  for (int mask = 0; mask < (1 << count); ++mask) {
    std::vector<ComplexVector> on_a, on_b;
    for (int i = 0; i < count; ++i) {
      if (mask & (1 << i)) on_a.push_back(set.vectors[i].a);
      else on_b.push_back(set.vectors[i].b);
    }
    // A product vector orthogonal to the set exists iff some split leaves both
    // sides with a nontrivial common orthogonal complement.
    if (rank_of(on_a, rank_tolerance) < 3 && rank_of(on_b, rank_tolerance) < 3) return false;
  }
  return true;
}

DensityMatrix upb_bes(UpbName name) {
  const UpbSet set = upb_set(name);
  ComplexMatrix m = ComplexMatrix::Identity(9, 9);
  for (const auto& pv : set.vectors) {
    const ComplexVector psi = pv.joint();
    m -= psi * psi.adjoint();
  }
  m /= 4.0;
  return DensityMatrix(std::move(m), {3, 3});
}

namespace {

void require_lambda(double lam, const char* who) {
  if (!(lam >= 0.0 && lam <= 1.0)) throw ArgumentError(std::string(who) + ": lambda must lie in [0, 1]");
}

}  // namespace

DensityMatrix appendix_b_example1(double lam) {
  require_lambda(lam, "appendix_b_example1");
  const ComplexVector zero = basis_vector(2, 0), one = basis_vector(2, 1);
  const ComplexVector plus = real_vector({1, 1});
  ComplexMatrix m = lam * kron(zero * zero.adjoint(), one * one.adjoint()) +
                    (1.0 - lam) * kron(one * one.adjoint(), plus * plus.adjoint());
  return DensityMatrix(std::move(m), {2, 2});
}

DensityMatrix appendix_b_example1_marginal(double lam, int k) {
  require_lambda(lam, "appendix_b_example1_marginal");
  if (k < 1) throw ArgumentError("appendix_b_example1_marginal: k must be at least 1");
  const ComplexVector zero = basis_vector(2, 0), one = basis_vector(2, 1);
  const ComplexVector plus = real_vector({1, 1});
  const double c = std::sqrt(lam * (1.0 - lam)) * std::pow(2.0, -(k - 1) / 2.0);
  const ComplexMatrix x = kron(zero * one.adjoint(), one * plus.adjoint());
  ComplexMatrix m = appendix_b_example1(lam).matrix() + c * (x + x.adjoint());
  return DensityMatrix(std::move(m), {2, 2});
}

PurebParams appendix_b_example1_trial(double lam, int k) {
  require_lambda(lam, "appendix_b_example1_trial");
  if (k < 1) throw ArgumentError("appendix_b_example1_trial: k must be at least 1");
  // Dicke position equals the number of ones for qubits.
  const std::size_t dim = static_cast<std::size_t>(k) + 1;
  std::vector<Complex> raw(2 * dim, Complex(0.0));
  raw[k] = std::sqrt(lam);
  // |+>^k = 2^{-k/2} sum_j sqrt(C(k, j)) |D_j>
  for (int j = 0; j <= k; ++j) {
    const double log_c = std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0);
    raw[dim + j] = std::sqrt(1.0 - lam) * std::exp(0.5 * log_c - 0.5 * k * std::numbers::ln2);
  }
  return PurebParams(2, 2, k, std::move(raw));
}

DensityMatrix appendix_b_example2(double lam, int d) {
  require_lambda(lam, "appendix_b_example2");
  require_dimension(d, "appendix_b_example2");
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(0, 0) = lam;
  b(1, 1) = 1.0 - lam;
  ComplexMatrix m = kron(ComplexMatrix::Identity(d, d) / static_cast<double>(d), b);
  return DensityMatrix(std::move(m), {d, 2});
}

PurebParams example2_preimage_k4() {
  const double a = 1.0 / (2.0 * std::numbers::sqrt2);
  const double b = std::sqrt(3.0) / 4.0;
  std::vector<Complex> raw(10, Complex(0.0));
  raw[0] = b;
  raw[2] = -a;
  raw[4] = b;
  raw[5 + 1] = 0.5;
  raw[5 + 3] = 0.5;
  return PurebParams(2, 2, 4, std::move(raw));
}

}  // namespace qpureb
