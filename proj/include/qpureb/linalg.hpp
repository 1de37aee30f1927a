// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file linalg.hpp
 * @brief Dense complex Hermitian linear algebra: spectra, matrix logarithms
 *        (eigendecomposition and Gauss-Legendre rational forms) and their
 *        Frechet derivatives.
 */

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qpureb {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Eigenvalues below this value are clamped before taking a logarithm.
inline constexpr double kDefaultLogFloor = 1e-18;

// Hermitian inputs are accepted up to this absolute defect (scaled by the
// largest entry when that exceeds one).
inline constexpr double kHermitianTolerance = 1e-10;

struct Spectrum {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

// max |m - m^dagger|
double hermitian_defect(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

// Throws ContractViolation when `m` is not square or not Hermitian.
Spectrum hermitian_eig(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& m);

// V f(w) V^dagger for a precomputed spectrum.
template <class F>
ComplexMatrix apply_spectral(const Spectrum& s, F&& f) {
  RealVector fw(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) fw[i] = f(s.values[i]);
  return s.vectors * fw.asDiagonal() * s.vectors.adjoint();
}

// Primary logarithm of a Hermitian PSD matrix with eigenvalues clamped below
// at `floor`. Throws ArgumentError for floor <= 0.
ComplexMatrix matrix_log_psd(const ComplexMatrix& m, double floor = kDefaultLogFloor);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// m-point Gauss-Legendre rule mapped to [0, 1].
QuadratureRule gauss_legendre_unit(int m);

// Principal square root of a Hermitian positive definite matrix, computed
// spectrally.
ComplexMatrix matrix_sqrt_pd(const ComplexMatrix& m);

// log(X) ~= 2^k r_m(X^{1/2^k}),  r_m(x) = sum_j w_j (x-1) / (t_j (x-1) + 1),
// with (t_j, w_j) the Gauss-Legendre rule on [0, 1]. Throws
// NumericalDomainError unless `m` is Hermitian positive definite.
ComplexMatrix matrix_log_pade(const ComplexMatrix& m, int nodes = 8, int roots = 6);

// Frechet derivative L_log(sigma)[e] of the floored logarithm by the
// Daleckii-Krein divided-difference formula.
ComplexMatrix log_frechet_eig(const Spectrum& sigma, const ComplexMatrix& e,
                              double floor = kDefaultLogFloor);

// Frechet derivative of matrix_log_pade at `m` in direction `e`, propagated
// through the square roots by Sylvester solves.
ComplexMatrix log_frechet_pade(const ComplexMatrix& m, const ComplexMatrix& e, int nodes = 8,
                               int roots = 6);

// First divided difference of log(max(x, floor)).
double log_divided_difference(double a, double b, double floor);

}  // namespace qpureb
