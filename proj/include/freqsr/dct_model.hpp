#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "freqsr/error.hpp"

namespace freqsr {

inline constexpr int kBlockSize = 8;
inline constexpr int kBlockArea = 64;

template <typename Scalar>
using Block8 = Eigen::Matrix<Scalar, 8, 8, Eigen::RowMajor>;

// Spatial sample plane (rows = height).
template <typename Scalar>
using PlaneT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Plane = PlaneT<double>;

// Grid of 8x8 coefficient blocks stored contiguously, block-major then
// row-major inside each block: element (r, c, u, v) lives at
// ((r * cols + c) * 64 + 8u + v). Block (r, c) maps onto an Eigen 8x8.
template <typename Scalar>
class BasicDctPlane {
 public:
  using BlockMap = Eigen::Map<Block8<Scalar>>;
  using ConstBlockMap = Eigen::Map<const Block8<Scalar>>;

  BasicDctPlane() = default;
  BasicDctPlane(int block_rows, int block_cols) : rows_(block_rows), cols_(block_cols) {
    if (block_rows < 1 || block_cols < 1) {
      throw InvalidArgument("DctPlane needs at least one block per axis");
    }
    data_.assign(static_cast<std::size_t>(block_rows) * block_cols * kBlockArea, Scalar(0));
  }

  int block_rows() const { return rows_; }
  int block_cols() const { return cols_; }
  std::size_t block_count() const { return static_cast<std::size_t>(rows_) * cols_; }
  bool empty() const { return data_.empty(); }

  BlockMap block(int r, int c) { return BlockMap(block_ptr(r, c)); }
  ConstBlockMap block(int r, int c) const { return ConstBlockMap(block_ptr(r, c)); }

  Scalar* block_ptr(int r, int c) {
    return data_.data() + (static_cast<std::size_t>(r) * cols_ + c) * kBlockArea;
  }
  const Scalar* block_ptr(int r, int c) const {
    return data_.data() + (static_cast<std::size_t>(r) * cols_ + c) * kBlockArea;
  }

  std::span<Scalar> coeffs() & { return data_; }
  std::span<const Scalar> coeffs() const& { return data_; }
  std::span<const Scalar> coeffs() const&& = delete;

  friend bool operator==(const BasicDctPlane&, const BasicDctPlane&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> data_;
};

using DctPlane = BasicDctPlane<double>;

enum class Subsampling { k444, k420 };

// Block-domain image: luma plus optional chroma, padded to whole MCUs.
// pixel_width/pixel_height hold the true (unpadded) raster size.
struct DctImage {
  DctPlane y;
  std::optional<DctPlane> cb;
  std::optional<DctPlane> cr;
  int pixel_width = 0;
  int pixel_height = 0;
  Subsampling subsampling = Subsampling::k444;

  bool has_chroma() const { return cb.has_value() && cr.has_value(); }
  friend bool operator==(const DctImage&, const DctImage&) = default;
};

// blockRows x blockCols x 64 tensor; channel k = 8u + v of the source block.
// value_min/value_max is the declared range of the contents.
template <typename Scalar>
class BasicFreqTensor {
 public:
  BasicFreqTensor() = default;
  BasicFreqTensor(int rows, int cols, Scalar value_min, Scalar value_max)
      : rows_(rows), cols_(cols), value_min_(value_min), value_max_(value_max) {
    if (rows < 1 || cols < 1) throw InvalidArgument("FreqTensor needs at least one block per axis");
    data_.assign(static_cast<std::size_t>(rows) * cols * kBlockArea, Scalar(0));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  static constexpr int channels() { return kBlockArea; }

  Scalar& at(int r, int c, int k) { return data_[(static_cast<std::size_t>(r) * cols_ + c) * kBlockArea + k]; }
  Scalar at(int r, int c, int k) const {
    return data_[(static_cast<std::size_t>(r) * cols_ + c) * kBlockArea + k];
  }

  Scalar value_min() const { return value_min_; }
  Scalar value_max() const { return value_max_; }
  void set_value_range(Scalar lo, Scalar hi) {
    value_min_ = lo;
    value_max_ = hi;
  }

  // Declares the range as the exact min/max of the contents.
  void fit_value_range() {
    auto [lo, hi] = std::minmax_element(data_.begin(), data_.end());
    value_min_ = *lo;
    value_max_ = *hi;
  }

  std::span<Scalar> values() & { return data_; }
  std::span<const Scalar> values() const& { return data_; }
  std::span<const Scalar> values() const&& = delete;

  friend bool operator==(const BasicFreqTensor&, const BasicFreqTensor&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Scalar value_min_ = 0;
  Scalar value_max_ = 0;
  std::vector<Scalar> data_;
};

using FreqTensor = BasicFreqTensor<double>;

// Interleaved 8-bit RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  RgbImage() = default;
  RgbImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), samples(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::uint8_t& at(int x, int y, int ch) { return samples[(static_cast<std::size_t>(y) * width + x) * 3 + ch]; }
  std::uint8_t at(int x, int y, int ch) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }
  bool valid() const { return samples.size() == static_cast<std::size_t>(width) * height * 3; }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Affine coefficient normalisation: [orig_min, orig_max] -> [val_min, val_max].
struct NormParams {
  double orig_min = -1024.0;
  double orig_max = 1016.0;
  double val_min = -1.0;
  double val_max = 1.0;
};

template <typename Scalar>
BasicFreqTensor<Scalar> blockify(const BasicDctPlane<Scalar>& plane) {
  BasicFreqTensor<Scalar> t(plane.block_rows(), plane.block_cols(), 0, 0);
  // Row-major 8x8 storage already places (u, v) at 8u + v.
  std::copy(plane.coeffs().begin(), plane.coeffs().end(), t.values().begin());
  t.fit_value_range();
  return t;
}

template <typename Scalar>
BasicDctPlane<Scalar> unblockify(const BasicFreqTensor<Scalar>& t) {
  BasicDctPlane<Scalar> plane(t.rows(), t.cols());
  std::copy(t.values().begin(), t.values().end(), plane.coeffs().begin());
  return plane;
}

}  // namespace freqsr
