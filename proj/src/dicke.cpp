// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/dicke.hpp"

#include "qpureb/errors.hpp"
#include "qpureb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace qpureb {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw SizeError("binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::size_t symmetric_dimension(int n, int d) {
  if (n < 0 || d < 1) throw ArgumentError("symmetric_dimension: need n >= 0, d >= 1");
  const std::uint64_t dim = binomial(static_cast<std::uint64_t>(n) + d - 1, d - 1);
  if (dim > std::numeric_limits<std::size_t>::max() / 64) throw SizeError("symmetric subspace too large");
  return static_cast<std::size_t>(dim);
}

namespace {

void enumerate(int remaining, int level, int d, Occupation& current, std::vector<Occupation>& out) {
  if (level == d - 1) {
    current[level] = remaining;
    out.push_back(current);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[level] = k;
    enumerate(remaining - k, level + 1, d, current, out);
  }
}

}  // namespace

DickeBasis::DickeBasis(int n, int d) : n_(n), d_(d) {
  if (n < 0 || d < 1) throw ArgumentError("DickeBasis: need n >= 0 and d >= 1");
  const std::size_t dim = symmetric_dimension(n, d);
  indices_.reserve(dim);
  Occupation current(d, 0);
  enumerate(n, 0, d, current, indices_);
}

std::size_t DickeBasis::position(std::span<const int> occupation) const {
  if (static_cast<int>(occupation.size()) != d_) throw ArgumentError("DickeBasis::position: wrong length");
  int remaining = n_;
  for (int k : occupation) {
    if (k < 0) throw ArgumentError("DickeBasis::position: negative occupation");
    remaining -= k;
  }
  if (remaining != 0) throw ArgumentError("DickeBasis::position: occupation does not sum to n");
  // Count the vectors that precede `occupation` in descending lexicographic
  // order, one level at a time.
  std::size_t pos = 0;
  remaining = n_;
  for (int level = 0; level + 1 < d_; ++level) {
    const int parts = d_ - level - 1;  // components left after this level
    // sum_{k > occ} C(remaining-k+parts-1, parts-1) = C(remaining-occ-1+parts, parts)
    if (remaining > occupation[level]) pos += symmetric_dimension(remaining - occupation[level] - 1, parts + 1);
    remaining -= occupation[level];
  }
  return pos;
}

DickeBasis enumerate_basis(int n, int d) {
  if (n < 1 || d < 2) throw ArgumentError("enumerate_basis: need n >= 1 and d >= 2");
  return DickeBasis(n, d);
}

ComplexVector dicke_state_vector(std::span<const int> occupation, int n, int d, std::size_t cap) {
  if (n < 1 || d < 2 || static_cast<int>(occupation.size()) != d) {
    throw ArgumentError("dicke_state_vector: invalid (n, d, occupation)");
  }
  if (std::accumulate(occupation.begin(), occupation.end(), 0) != n ||
      std::any_of(occupation.begin(), occupation.end(), [](int k) { return k < 0; })) {
    throw ArgumentError("dicke_state_vector: occupation must be non-negative and sum to n");
  }
  std::size_t total = 1;
  for (int q = 0; q < n; ++q) {
    if (total > cap / static_cast<std::size_t>(d)) throw SizeError("dicke_state_vector: exceeds oracle cap");
    total *= static_cast<std::size_t>(d);
  }
  // multinomial n! / prod k_i!
  double log_multinomial = std::lgamma(n + 1.0);
  for (int k : occupation) log_multinomial -= std::lgamma(k + 1.0);
  const double amp = std::exp(-0.5 * log_multinomial);

  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(total));
  std::vector<int> counts(d);
  for (std::size_t x = 0; x < total; ++x) {
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t rest = x;
    for (int q = 0; q < n; ++q) {
      ++counts[rest % d];
      rest /= d;
    }
    if (std::equal(counts.begin(), counts.end(), occupation.begin())) psi[static_cast<Eigen::Index>(x)] = amp;
  }
  return psi;
}

BTensor::BTensor(int n, int d) : n_(n), d_(d), upper_(std::max(n, 0), std::max(d, 1)), lower_(std::max(n - 1, 0), std::max(d, 1)) {
  if (n < 1 || d < 2) throw ArgumentError("BTensor: need n >= 1 and d >= 2");
  const std::size_t lower_size = lower_.size();
  raise_pos_.resize(lower_size * d);
  raise_coef_.resize(lower_size * d);
  Occupation k(d);
  for (std::size_t m = 0; m < lower_size; ++m) {
    const Occupation& occ = lower_[m];
    for (int i = 0; i < d; ++i) {
      k = occ;
      ++k[i];
      raise_pos_[m * d + i] = upper_.position(k);
      raise_coef_[m * d + i] = std::sqrt((occ[i] + 1.0) / n);
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> acc;
  const std::size_t block_size = static_cast<std::size_t>(d) * d;
  for (std::size_t m = 0; m < lower_size; ++m) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const std::size_t row = raise_pos_[m * d + i];
        const std::size_t col = raise_pos_[m * d + j];
        auto [it, inserted] = acc.try_emplace({row, col}, block_size, 0.0);
        it->second[static_cast<std::size_t>(i) * d + j] += raise_coef_[m * d + i] * raise_coef_[m * d + j];
      }
    }
  }
  blocks_.reserve(acc.size());
  for (auto& [key, values] : acc) blocks_.push_back({key.first, key.second, std::move(values)});
}

const BTensor::Block* BTensor::find(std::size_t row, std::size_t col) const {
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), std::make_pair(row, col),
                             [](const Block& b, const std::pair<std::size_t, std::size_t>& key) {
                               return std::make_pair(b.row, b.col) < key;
                             });
  if (it == blocks_.end() || it->row != row || it->col != col) return nullptr;
  return &*it;
}

RealMatrix BTensor::entry(std::size_t row, std::size_t col) const {
  RealMatrix out = RealMatrix::Zero(d_, d_);
  if (const Block* b = find(row, col)) {
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) out(i, j) = (*b)(i, j, d_);
  }
  return out;
}

DensityMatrix rdm_from_params(std::span<const Complex> p, int d_a, const BTensor& bt) {
  if (d_a < 1 || p.size() != static_cast<std::size_t>(d_a) * bt.basis().size()) {
    throw ContractViolation("rdm_from_params: coefficient count does not match d_A * dim(Sym_n)");
  }
  double norm2 = 0.0;
  for (const Complex& z : p) norm2 += std::norm(z);
  if (!(std::abs(std::sqrt(norm2) - 1.0) <= 1e-10)) {
    throw ContractViolation("rdm_from_params: coefficients are not normalized");
  }
  ComplexMatrix sigma;
  kernels::marginal(bt, d_a, p, sigma);
  return DensityMatrix(std::move(sigma), {d_a, bt.d()});
}

}  // namespace qpureb
