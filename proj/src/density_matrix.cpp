// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/density_matrix.hpp"

#include "qpureb/errors.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

namespace qpureb {

DensityMatrix::DensityMatrix(ComplexMatrix m, Dims dims) : dims_(dims) {
  if (dims.a < 1 || dims.b < 1) throw ContractViolation("DensityMatrix: dimensions must be positive");
  if (m.rows() != dims.total() || m.cols() != dims.total()) {
    throw ContractViolation("DensityMatrix: matrix shape does not match d_A*d_B");
  }
  const double defect = hermitian_defect(m);
  if (!(defect <= kStateHermitianTolerance)) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (defect " << defect << ")";
    throw ContractViolation(os.str());
  }
  mat_ = hermitian_part(m);
  const double trace = mat_.trace().real();
  if (!(std::abs(trace - 1.0) <= kStateTraceTolerance)) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << trace << " differs from one";
    throw ContractViolation(os.str());
  }
  const double lmin = min_eigenvalue(mat_);
  if (!(lmin >= -kStatePsdTolerance)) {
    std::ostringstream os;
    os << "DensityMatrix: smallest eigenvalue " << lmin << " is negative";
    throw ContractViolation(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  const int d = dims.total();
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d), dims);
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims) {
  if (dims.a < 1 || dims.b < 1 || m.rows() != dims.total() || m.cols() != dims.total()) {
    throw ArgumentError("partial_transpose: matrix shape does not match dims");
  }
  ComplexMatrix out(m.rows(), m.cols());
  const int da = dims.a, db = dims.b;
  for (int a = 0; a < da; ++a)
    for (int i = 0; i < db; ++i)
      for (int b = 0; b < da; ++b)
        for (int j = 0; j < db; ++j) out(a * db + j, b * db + i) = m(a * db + i, b * db + j);
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho) {
  return partial_transpose(rho.matrix(), rho.dims());
}

ComplexMatrix partial_trace_tail(const ComplexVector& psi, std::span<const int> dims) {
  if (dims.size() < 2) throw ArgumentError("partial_trace_tail: need at least two factors");
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d < 1) throw ArgumentError("partial_trace_tail: factor dimensions must be positive");
    total *= d;
  }
  if (psi.size() != total) throw ArgumentError("partial_trace_tail: vector length mismatch");
  const Eigen::Index keep = static_cast<Eigen::Index>(dims[0]) * dims[1];
  const Eigen::Index rest = total / keep;
  // Row-major reshape: first factor is the most significant digit.
  ComplexMatrix psi_mat(keep, rest);
  for (Eigen::Index r = 0; r < keep; ++r)
    for (Eigen::Index c = 0; c < rest; ++c) psi_mat(r, c) = psi[r * rest + c];
  return psi_mat * psi_mat.adjoint();
}

double entropy_term(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(rho), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double w = solver.eigenvalues()[i];
    if (w > 0.0) s += w * std::log(w);
  }
  return s;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, double floor) {
  if (rho.dims() != sigma.dims()) throw ArgumentError("relative_entropy: dimension mismatch");
  const ComplexMatrix log_sigma = matrix_log_psd(sigma.matrix(), floor);
  const double cross = (rho.matrix() * log_sigma).trace().real();
  return entropy_term(rho.matrix()) - cross;
}

DensityMatrix random_density_matrix(int d_a, int d_b, std::uint64_t seed) {
  if (d_a < 1 || d_b < 1) throw ArgumentError("random_density_matrix: dimensions must be positive");
  const int d = d_a * d_b;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(hermitian_part(m), {d_a, d_b});
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
  return out;
}

DensityMatrix product_state(const ComplexVector& a, const ComplexVector& b) {
  const ComplexVector an = a.normalized();
  const ComplexVector bn = b.normalized();
  const ComplexMatrix pa = an * an.adjoint();
  const ComplexMatrix pb = bn * bn.adjoint();
  return DensityMatrix(kron(pa, pb), {static_cast<int>(a.size()), static_cast<int>(b.size())});
}

}  // namespace qpureb
