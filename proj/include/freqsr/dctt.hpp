#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "freqsr/dct_model.hpp"

namespace freqsr::dctt {

enum class DType : std::uint8_t { kI32 = 0, kF32 = 1, kF64 = 2 };

// One record: "DCTT", u8 version, u8 dtype, u8 ndim, u32 dims[ndim],
// row-major little-endian payload. A file holds one or more records.
struct Tensor {
  DType dtype = DType::kF64;
  std::vector<std::uint32_t> dims;
  std::vector<double> values;

  std::size_t element_count() const;
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

// Coefficient plane as (block_rows, block_cols, 8, 8). i32 requires integral values.
Tensor from_plane(const DctPlane& plane, DType dtype = DType::kI32);
DctPlane to_plane(const Tensor& t);

// (rows, cols, 64).
Tensor from_freq_tensor(const FreqTensor& t, DType dtype = DType::kF64);
FreqTensor to_freq_tensor(const Tensor& t);

std::vector<std::uint8_t> encode(std::span<const Tensor> tensors);
std::vector<Tensor> decode(std::span<const std::uint8_t> bytes);

void write(const std::filesystem::path& path, std::span<const Tensor> tensors);
std::vector<Tensor> read(const std::filesystem::path& path);

}  // namespace freqsr::dctt
