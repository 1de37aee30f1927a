// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace qpureb {

// Precondition on an input object was not met (non-Hermitian matrix,
// unnormalized coefficients, ...).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside the domain of a numerical routine (e.g. log of a singular matrix).
struct NumericalDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SizeError : std::length_error {
  using std::length_error::length_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qpureb
