// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/linalg.hpp"

#include "qpureb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace qpureb {

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

static void require_hermitian(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.size() == 0) {
    throw ContractViolation(std::string(who) + ": matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = hermitian_defect(m);
  if (!(defect <= kHermitianTolerance * scale)) {
    throw ContractViolation(std::string(who) + ": matrix is not Hermitian (defect " +
                            std::to_string(defect) + ")");
  }
}

Spectrum hermitian_eig(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw NumericalDomainError("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& m) {
  require_hermitian(m, "min_eigenvalue");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

ComplexMatrix matrix_log_psd(const ComplexMatrix& m, double floor) {
  if (!(floor > 0.0)) throw ArgumentError("matrix_log_psd: floor must be positive");
  const Spectrum s = hermitian_eig(m);
  return hermitian_part(apply_spectral(s, [floor](double w) { return std::log(std::max(w, floor)); }));
}

namespace {

// (P_m(x), P_m'(x)) by the three-term recurrence.
std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (m == 0) return {1.0, 0.0};
  return {p1, m * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

QuadratureRule gauss_legendre_unit(int m) {
  if (m < 1) throw ArgumentError("gauss_legendre_unit: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(m, x).second;
    rule.nodes[i] = 0.5 * (x + 1.0);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

static void require_positive_definite(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.size() == 0) {
    throw NumericalDomainError(std::string(who) + ": matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!(hermitian_defect(m) <= kHermitianTolerance * scale)) {
    throw NumericalDomainError(std::string(who) + ": matrix is not Hermitian");
  }
  Eigen::LLT<ComplexMatrix> llt(hermitian_part(m));
  if (llt.info() != Eigen::Success) {
    throw NumericalDomainError(std::string(who) + ": matrix is not positive definite");
  }
}

ComplexMatrix matrix_sqrt_pd(const ComplexMatrix& m) {
  require_positive_definite(m, "matrix_sqrt_pd");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  const RealVector root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return hermitian_part(solver.eigenvectors() * root.cast<Complex>().asDiagonal() *
                        solver.eigenvectors().adjoint());
}

ComplexMatrix matrix_log_pade(const ComplexMatrix& m, int nodes, int roots) {
  if (nodes < 1 || roots < 0) throw ArgumentError("matrix_log_pade: invalid hyper-parameters");
  require_positive_definite(m, "matrix_log_pade");
  const Eigen::Index n = m.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  ComplexMatrix x = hermitian_part(m);
  for (int s = 0; s < roots; ++s) x = matrix_sqrt_pd(x);
  const QuadratureRule rule = gauss_legendre_unit(nodes);
  const ComplexMatrix xm1 = x - eye;
  ComplexMatrix r = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < nodes; ++j) {
    const ComplexMatrix denom = rule.nodes[j] * xm1 + eye;
    r += rule.weights[j] * denom.partialPivLu().solve(xm1);
  }
  return hermitian_part(std::ldexp(1.0, roots) * r);
}

double log_divided_difference(double a, double b, double floor) {
  const double fa = std::max(a, floor);
  const double fb = std::max(b, floor);
  if (a <= floor && b <= floor) return 0.0;
  if (a > floor && b > floor) {
    const double x = fa / fb - 1.0;
    if (std::abs(x) < 1e-6) {
      // log(1+x)/x series: removable singularity at a == b.
      return (1.0 - x / 2.0 + x * x / 3.0 - x * x * x / 4.0) / fb;
    }
  }
  return (std::log(fa) - std::log(fb)) / (a - b);
}

ComplexMatrix log_frechet_eig(const Spectrum& sigma, const ComplexMatrix& e, double floor) {
  const Eigen::Index n = sigma.values.size();
  ComplexMatrix et = sigma.vectors.adjoint() * e * sigma.vectors;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      et(a, b) *= log_divided_difference(sigma.values[a], sigma.values[b], floor);
    }
  }
  return sigma.vectors * et * sigma.vectors.adjoint();
}

ComplexMatrix log_frechet_pade(const ComplexMatrix& m, const ComplexMatrix& e, int nodes,
                               int roots) {
  if (nodes < 1 || roots < 0) throw ArgumentError("log_frechet_pade: invalid hyper-parameters");
  require_positive_definite(m, "log_frechet_pade");
  const Eigen::Index n = m.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  ComplexMatrix x = hermitian_part(m);
  ComplexMatrix dx = e;
  for (int s = 0; s < roots; ++s) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(x);
    const ComplexMatrix& v = solver.eigenvectors();
    const RealVector w = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    x = hermitian_part(v * w.cast<Complex>().asDiagonal() * v.adjoint());
    // Sylvester equation  X dY + dY X = dX  for the derivative of the root.
    ComplexMatrix t = v.adjoint() * dx * v;
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) t(a, b) /= (w[a] + w[b]);
    dx = v * t * v.adjoint();
  }
  const QuadratureRule rule = gauss_legendre_unit(nodes);
  const ComplexMatrix xm1 = x - eye;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < nodes; ++j) {
    // d[(X-1)(t(X-1)+1)^{-1}] = R dX R with R = (t(X-1)+1)^{-1}.
    const ComplexMatrix r = (rule.nodes[j] * xm1 + eye).partialPivLu().inverse();
    out += rule.weights[j] * (r * dx * r);
  }
  return std::ldexp(1.0, roots) * out;
}

}  // namespace qpureb
