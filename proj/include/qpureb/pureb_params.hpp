// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qpureb/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qpureb {

// d_A * C(n + d_B - 1, d_B - 1)
std::size_t pureb_parameter_count(int d_a, int d_b, int n);

/// Unnormalized coefficients p~_{a,k} of a pure n-bosonic extension
/// sum_{a,k} p_{a,k} |a> (x) |D^n_k>, laid out as raw[a * dim + pos(k)].
/// The physical coefficients are the normalized view p = p~ / |p~|.
class PurebParams {
 public:
  PurebParams() = default;
  PurebParams(int d_a, int d_b, int n, std::vector<Complex> raw);

  // i.i.d. complex standard normal entries.
  static PurebParams random(int d_a, int d_b, int n, std::uint64_t seed);

  int d_a() const noexcept { return d_a_; }
  int d_b() const noexcept { return d_b_; }
  int n() const noexcept { return n_; }
  std::size_t basis_size() const noexcept { return d_a_ > 0 ? raw_.size() / d_a_ : 0; }
  std::size_t size() const noexcept { return raw_.size(); }

  std::span<const Complex> raw() const noexcept { return raw_; }
  std::span<Complex> raw() noexcept { return raw_; }

  double norm() const;
  std::vector<Complex> normalized() const;

 private:
  int d_a_ = 0;
  int d_b_ = 0;
  int n_ = 0;
  std::vector<Complex> raw_;
};

// Deterministic 64-bit mixing for deriving per-task seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace qpureb
