#pragma once

#include <array>

#include "freqsr/dct_model.hpp"

namespace freqsr {

struct CropSpec {
  int size_blocks = 32;
};

struct BlockOrigin {
  int row = 0;
  int col = 0;
};

// Top-left of the centred size x size window, odd margins rounded down.
BlockOrigin center_crop_origin(int rows, int cols, int size);

// Verbatim copy of the size x size block window at `origin`.
DctPlane crop_blocks(const DctPlane& plane, BlockOrigin origin, int size);

DctPlane center_crop(const DctPlane& plane, CropSpec spec);

inline double normalize(double x, const NormParams& p) {
  return p.val_min + ((x - p.orig_min) / (p.orig_max - p.orig_min)) * (p.val_max - p.val_min);
}
inline double denormalize(double x, const NormParams& p) {
  return p.orig_min + ((x - p.val_min) / (p.val_max - p.val_min)) * (p.orig_max - p.orig_min);
}

// Elementwise affine maps; values outside the source range are not clamped.
FreqTensor normalize(const FreqTensor& t, const NormParams& p);
FreqTensor denormalize(const FreqTensor& t, const NormParams& p);
DctPlane normalize(const DctPlane& plane, const NormParams& p);
DctPlane denormalize(const DctPlane& plane, const NormParams& p);

// 1-D conversion matrices for the two output halves: an 8-point spectrum
// zero-padded to 16 points (scaled by sqrt 2), inverse transformed, and the
// half h re-analysed with the 8-point DCT is matrix(h) * spectrum.
const std::array<Block8<double>, 2>& upsample_conversion_matrices();

// 2x DCT-domain enlargement: block (r, c) becomes blocks (2r + a, 2c + b)
// = T_a * B * T_b^T.
DctPlane upsample_dct_x2(const DctPlane& plane);

// crop -> normalize -> upsample x2 -> blockify on a luma plane. With no crop
// the whole plane is used.
FreqTensor preprocess_y(const DctPlane& y, const CropSpec* crop, const NormParams& p);

// Training-time chain on a colour image (chroma must be present). Only
// scale == 2 is supported.
FreqTensor preprocess_lr(const DctImage& img, CropSpec spec, const NormParams& p = {}, int scale = 2);

// Inference-time chain: the same steps without cropping.
FreqTensor preprocess_full(const DctImage& img, const NormParams& p = {}, int scale = 2);

// unblockify -> denormalize.
DctPlane postprocess_hr(const FreqTensor& t, const NormParams& p);

}  // namespace freqsr
