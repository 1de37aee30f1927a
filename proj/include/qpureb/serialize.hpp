// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Density matrix file formats.
//
//   JSON:   {"d_a": 2, "d_b": 2, "re": [[...], ...], "im": [[...], ...]}
//   Binary: "QDM1", u32 d_a, u32 d_b, then d^2 (re, im) float64 pairs in
//           row-major order; all little-endian.

#pragma once

#include "qpureb/density_matrix.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace qpureb {

nlohmann::json to_json(const DensityMatrix& rho);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& re, const nlohmann::json& im);

// Throws ArgumentError on malformed input and ContractViolation when the
// decoded matrix is not a density matrix.
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

std::vector<std::byte> encode_binary(const DensityMatrix& rho);
DensityMatrix decode_binary(std::span<const std::byte> bytes);

// Format is chosen by extension: ".json" writes JSON, anything else binary.
void save_density_matrix(const std::filesystem::path& path, const DensityMatrix& rho);

// Detects the binary magic; otherwise parses JSON. Throws IoError when the
// file cannot be read.
DensityMatrix load_density_matrix(const std::filesystem::path& path);

}  // namespace qpureb
