// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/gellmann.hpp"

#include "qpureb/errors.hpp"

#include <cmath>

namespace qpureb {
namespace {

int pair_count(int d) { return d * (d - 1) / 2; }

double diag_scale(int l) { return std::sqrt(2.0 / (l * (l + 1.0))); }

}  // namespace

GellMannBasis::GellMannBasis(int d) : d_(d) {
  if (d < 2) throw ArgumentError("GellMannBasis: dimension must be at least 2");
  const Complex i1(0.0, 1.0);
  mats_.reserve(d * d - 1);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      mats_.push_back(std::move(m));
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = -i1;
      m(k, j) = i1;
      mats_.push_back(std::move(m));
    }
  for (int l = 1; l < d; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < l; ++j) m(j, j) = diag_scale(l);
    m(l, l) = -l * diag_scale(l);
    mats_.push_back(std::move(m));
  }
}

StateVector gellmann_decompose(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw ArgumentError("gellmann_decompose: need a square matrix of size >= 2");
  }
  const int d = static_cast<int>(m.rows());
  const int p = pair_count(d);
  StateVector out{RealVector::Zero(d * d - 1), d};
  int idx = 0;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k, ++idx) {
      out.vec[idx] = 0.5 * (m(j, k) + m(k, j)).real();
      out.vec[p + idx] = 0.5 * (Complex(0.0, 1.0) * (m(j, k) - m(k, j))).real();
    }
  double running = 0.0;
  for (int l = 1; l < d; ++l) {
    running += m(l - 1, l - 1).real();
    out.vec[2 * p + l - 1] = 0.5 * diag_scale(l) * (running - l * m(l, l).real());
  }
  return out;
}

StateVector gellmann_decompose(const DensityMatrix& rho) { return gellmann_decompose(rho.matrix()); }

ComplexMatrix gellmann_combination(const StateVector& v) {
  const int d = v.d;
  if (d < 2 || v.vec.size() != d * d - 1) {
    throw ArgumentError("gellmann_combination: vector length must be d^2-1");
  }
  const int p = pair_count(d);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  int idx = 0;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k, ++idx) {
      const Complex z(v.vec[idx], -v.vec[p + idx]);
      m(j, k) = z;
      m(k, j) = std::conj(z);
    }
  for (int l = 1; l < d; ++l) {
    const double c = v.vec[2 * p + l - 1] * diag_scale(l);
    for (int j = 0; j < l; ++j) m(j, j) += c;
    m(l, l) -= l * c;
  }
  return m;
}

ComplexMatrix gellmann_reconstruct(const StateVector& v) {
  ComplexMatrix m = gellmann_combination(v);
  m.diagonal().array() += 1.0 / v.d;
  return m;
}

DensityMatrix gellmann_reconstruct(const StateVector& v, Dims dims) {
  if (dims.total() != v.d) throw ArgumentError("gellmann_reconstruct: dims do not match vector");
  return DensityMatrix(gellmann_reconstruct(v), dims);
}

}  // namespace qpureb
