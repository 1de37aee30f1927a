// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/pureb_params.hpp"

#include "qpureb/dicke.hpp"
#include "qpureb/errors.hpp"

#include <cmath>
#include <random>

namespace qpureb {

std::size_t pureb_parameter_count(int d_a, int d_b, int n) {
  if (d_a < 1 || d_b < 2 || n < 1) throw ArgumentError("pureb_parameter_count: invalid dimensions");
  return static_cast<std::size_t>(d_a) * symmetric_dimension(n, d_b);
}

PurebParams::PurebParams(int d_a, int d_b, int n, std::vector<Complex> raw)
    : d_a_(d_a), d_b_(d_b), n_(n), raw_(std::move(raw)) {
  if (raw_.size() != pureb_parameter_count(d_a, d_b, n)) {
    throw ArgumentError("PurebParams: coefficient count does not match d_A * dim(Sym_n)");
  }
}

PurebParams PurebParams::random(int d_a, int d_b, int n, std::uint64_t seed) {
  std::vector<Complex> raw(pureb_parameter_count(d_a, d_b, n));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& z : raw) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return PurebParams(d_a, d_b, n, std::move(raw));
}

double PurebParams::norm() const {
  double s = 0.0;
  for (const auto& z : raw_) s += std::norm(z);
  return std::sqrt(s);
}

std::vector<Complex> PurebParams::normalized() const {
  const double r = norm();
  if (!(r > 0.0)) throw NumericalDomainError("PurebParams: zero coefficient vector");
  std::vector<Complex> out(raw_);
  for (auto& z : out) z /= r;
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the combined value
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace qpureb
