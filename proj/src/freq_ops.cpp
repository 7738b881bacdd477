#include "freqsr/freq_ops.hpp"

#include <cmath>
#include <string>

#include "freqsr/transforms.hpp"

namespace freqsr {

BlockOrigin center_crop_origin(int rows, int cols, int size) {
  if (size < 1) throw InvalidArgument("crop size must be >= 1");
  if (size > rows || size > cols) {
    throw CropTooLarge("window of " + std::to_string(size) + " blocks exceeds " + std::to_string(rows) + "x" +
                       std::to_string(cols) + " grid");
  }
  return {(rows - size) / 2, (cols - size) / 2};
}

DctPlane crop_blocks(const DctPlane& plane, BlockOrigin origin, int size) {
  if (size < 1) throw InvalidArgument("crop size must be >= 1");
  if (origin.row < 0 || origin.col < 0 || origin.row + size > plane.block_rows() ||
      origin.col + size > plane.block_cols()) {
    throw CropTooLarge("crop window leaves the block grid");
  }
  DctPlane out(size, size);
  for (int r = 0; r < size; ++r) {
    // A row of blocks is contiguous in both planes.
    const double* src = plane.block_ptr(origin.row + r, origin.col);
    std::copy(src, src + static_cast<std::size_t>(size) * kBlockArea, out.block_ptr(r, 0));
  }
  return out;
}

DctPlane center_crop(const DctPlane& plane, CropSpec spec) {
  return crop_blocks(plane, center_crop_origin(plane.block_rows(), plane.block_cols(), spec.size_blocks),
                     spec.size_blocks);
}

FreqTensor normalize(const FreqTensor& t, const NormParams& p) {
  FreqTensor out = t;
  for (double& v : out.values()) v = normalize(v, p);
  out.set_value_range(normalize(t.value_min(), p), normalize(t.value_max(), p));
  return out;
}

FreqTensor denormalize(const FreqTensor& t, const NormParams& p) {
  FreqTensor out = t;
  for (double& v : out.values()) v = denormalize(v, p);
  out.set_value_range(denormalize(t.value_min(), p), denormalize(t.value_max(), p));
  return out;
}

DctPlane normalize(const DctPlane& plane, const NormParams& p) {
  DctPlane out = plane;
  for (double& v : out.coeffs()) v = normalize(v, p);
  return out;
}

DctPlane denormalize(const DctPlane& plane, const NormParams& p) {
  DctPlane out = plane;
  for (double& v : out.coeffs()) v = denormalize(v, p);
  return out;
}

const std::array<Block8<double>, 2>& upsample_conversion_matrices() {
  static const std::array<Block8<double>, 2> matrices = [] {
    const auto& d8 = dct_basis<double, 8>();
    const auto& d16 = dct_basis<double, 16>();
    // Zero-padded inverse: spatial16 = sqrt(2) * d16^T[:, 0:8] * spectrum8.
    const Eigen::Matrix<double, 16, 8> synth = std::sqrt(2.0) * d16.transpose().leftCols<8>();
    std::array<Block8<double>, 2> m;
    m[0] = d8 * synth.topRows<8>();
    m[1] = d8 * synth.bottomRows<8>();
    return m;
  }();
  return matrices;
}

DctPlane upsample_dct_x2(const DctPlane& plane) {
  const auto& t = upsample_conversion_matrices();
  const Block8<double> t0t = t[0].transpose();
  const Block8<double> t1t = t[1].transpose();
  DctPlane out(plane.block_rows() * 2, plane.block_cols() * 2);
  Block8<double> left0, left1;
  for (int r = 0; r < plane.block_rows(); ++r) {
    for (int c = 0; c < plane.block_cols(); ++c) {
      const auto b = plane.block(r, c);
      left0.noalias() = t[0] * b;
      left1.noalias() = t[1] * b;
      out.block(2 * r, 2 * c).noalias() = left0 * t0t;
      out.block(2 * r, 2 * c + 1).noalias() = left0 * t1t;
      out.block(2 * r + 1, 2 * c).noalias() = left1 * t0t;
      out.block(2 * r + 1, 2 * c + 1).noalias() = left1 * t1t;
    }
  }
  return out;
}

FreqTensor preprocess_y(const DctPlane& y, const CropSpec* crop, const NormParams& p) {
  const DctPlane cropped = crop ? center_crop(y, *crop) : y;
  FreqTensor t = blockify(upsample_dct_x2(normalize(cropped, p)));
  t.fit_value_range();
  return t;
}

namespace {

void check_preprocess_input(const DctImage& img, int scale) {
  if (scale != 2) throw InvalidArgument("only scale factor 2 is supported");
  if (!img.has_chroma()) throw MissingChroma("super-resolution pipeline needs a colour JPEG");
}

}  // namespace

FreqTensor preprocess_lr(const DctImage& img, CropSpec spec, const NormParams& p, int scale) {
  check_preprocess_input(img, scale);
  return preprocess_y(img.y, &spec, p);
}

FreqTensor preprocess_full(const DctImage& img, const NormParams& p, int scale) {
  check_preprocess_input(img, scale);
  return preprocess_y(img.y, nullptr, p);
}

DctPlane postprocess_hr(const FreqTensor& t, const NormParams& p) { return denormalize(unblockify(t), p); }

}  // namespace freqsr
