// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/serialize.hpp"

#include "qpureb/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace qpureb {
namespace {

constexpr std::array<char, 4> kMagic = {'Q', 'D', 'M', '1'};

template <class T>
void put_le(std::vector<std::byte>& out, T value) {
  auto raw = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  out.insert(out.end(), raw.begin(), raw.end());
}

template <class T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  std::array<std::byte, sizeof(T)> raw;
  std::memcpy(raw.data(), bytes.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  return std::bit_cast<T>(raw);
}

}  // namespace

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ri = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

nlohmann::json to_json(const DensityMatrix& rho) {
  nlohmann::json j = matrix_to_json(rho.matrix());
  j["d_a"] = rho.dims().a;
  j["d_b"] = rho.dims().b;
  return j;
}

ComplexMatrix matrix_from_json(const nlohmann::json& re, const nlohmann::json& im) {
  if (!re.is_array() || !im.is_array() || re.size() != im.size()) {
    throw ArgumentError("matrix json: 're' and 'im' must be arrays of equal size");
  }
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(re.at(0).size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& rr = re.at(r);
    const auto& ri = im.at(r);
    if (!rr.is_array() || !ri.is_array() || static_cast<Eigen::Index>(rr.size()) != cols ||
        static_cast<Eigen::Index>(ri.size()) != cols) {
      throw ArgumentError("matrix json: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(rr.at(c).get<double>(), ri.at(c).get<double>());
  }
  return m;
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
  try {
    const int da = j.at("d_a").get<int>();
    const int db = j.at("d_b").get<int>();
    ComplexMatrix m = matrix_from_json(j.at("re"), j.at("im"));
    if (da < 1 || db < 1 || m.rows() != da * db || m.cols() != da * db) {
      throw ArgumentError("density matrix json: shape does not match d_a*d_b");
    }
    return DensityMatrix(std::move(m), {da, db});
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("density matrix json: ") + e.what());
  }
}

std::vector<std::byte> encode_binary(const DensityMatrix& rho) {
  std::vector<std::byte> out;
  const auto n = static_cast<std::size_t>(rho.dim());
  out.reserve(12 + 16 * n * n);
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(rho.dims().a));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(rho.dims().b));
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      put_le<double>(out, m(r, c).real());
      put_le<double>(out, m(r, c).imag());
    }
  return out;
}

DensityMatrix decode_binary(std::span<const std::byte> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic.data(), 4) != 0) {
    throw ArgumentError("binary density matrix: missing QDM1 header");
  }
  const auto da = get_le<std::uint32_t>(bytes, 4);
  const auto db = get_le<std::uint32_t>(bytes, 8);
  if (da == 0 || db == 0 || da > 65536 || db > 65536) {
    throw ArgumentError("binary density matrix: invalid dimensions");
  }
  const std::size_t n = static_cast<std::size_t>(da) * db;
  if (bytes.size() != 12 + 16 * n * n) throw ArgumentError("binary density matrix: payload size mismatch");
  ComplexMatrix m(n, n);
  std::size_t off = 12;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double re = get_le<double>(bytes, off);
      const double im = get_le<double>(bytes, off + 8);
      m(r, c) = Complex(re, im);
      off += 16;
    }
  return DensityMatrix(std::move(m), {static_cast<int>(da), static_cast<int>(db)});
}

void save_density_matrix(const std::filesystem::path& path, const DensityMatrix& rho) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  if (path.extension() == ".json") {
    os << to_json(rho).dump(2) << '\n';
  } else {
    const auto bytes = encode_binary(rho);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  if (!os) throw IoError("failed writing " + path.string());
}

DensityMatrix load_density_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (raw.size() >= 4 && std::memcmp(raw.data(), kMagic.data(), 4) == 0) {
    return decode_binary(std::as_bytes(std::span<const char>(raw)));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(raw.begin(), raw.end());
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(path.string() + ": neither QDM1 binary nor JSON (" + e.what() + ")");
  }
  return density_matrix_from_json(j);
}

}  // namespace qpureb
