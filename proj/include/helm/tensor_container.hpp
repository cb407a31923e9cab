// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/common.hpp>

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <map>

namespace helm {

enum class DType : std::uint8_t { f32, f64 };

const char* dtype_name(DType d);
std::size_t dtype_size(DType d);

/// One named array: little-endian, row-major raw bytes.
struct Tensor {
  DType dtype = DType::f64;
  std::vector<std::uint64_t> shape;
  std::vector<std::uint8_t> bytes;

  static Tensor from_f64(std::vector<std::uint64_t> shape, std::span<const double> values);
  static Tensor from_f32(std::vector<std::uint64_t> shape, std::span<const float> values);
  /// Stores doubles at the requested precision.
  static Tensor from_values(DType dtype, std::vector<std::uint64_t> shape, std::span<const double> values);

  std::uint64_t numel() const;
  std::uint64_t nbytes() const { return numel() * dtype_size(dtype); }
  std::vector<double> to_f64() const;

  bool operator==(const Tensor&) const = default;
};

/// NOTENSR1 container:
///   8-byte magic "NOTENSR1"
///   u64-LE header length L
///   L bytes of UTF-8 JSON: {name: {dtype, shape, offset, nbytes, checksum}, "meta": {...}}
///   data section; offsets are relative to its start.
/// The optional per-tensor "checksum" is the FNV-1a 64-bit hash of the
/// tensor bytes as 16 lowercase hex digits and is verified on read.
struct TensorContainer {
  std::map<std::string, Tensor> tensors;
  nlohmann::json meta = nlohmann::json::object();

  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const { return tensors.count(name) != 0; }

  bool operator==(const TensorContainer&) const = default;
};

std::vector<std::uint8_t> serialize_container(const TensorContainer& c);
TensorContainer parse_container(std::span<const std::uint8_t> bytes);

void write_container(const std::filesystem::path& path, const TensorContainer& c);
TensorContainer read_container(const std::filesystem::path& path);

/// Header JSON only (for inspection).
nlohmann::json read_container_header(const std::filesystem::path& path);

std::string fnv1a64_hex(std::span<const std::uint8_t> bytes);

}  // namespace helm
