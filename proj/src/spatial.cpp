#include "freqsr/spatial.hpp"

#include <algorithm>
#include <cmath>

#include "freqsr/freq_ops.hpp"
#include "freqsr/transforms.hpp"

namespace freqsr {

Plane idct_plane(const DctPlane& plane) {
  Plane out(plane.block_rows() * 8, plane.block_cols() * 8);
  for (int r = 0; r < plane.block_rows(); ++r) {
    for (int c = 0; c < plane.block_cols(); ++c) {
      out.block<8, 8>(r * 8, c * 8) = idct8(plane.block(r, c));
    }
  }
  return out;
}

DctPlane fdct_plane(const Plane& samples) {
  if (samples.rows() % 8 != 0 || samples.cols() % 8 != 0 || samples.size() == 0) {
    throw DimensionMismatch("fdct_plane needs non-empty dims that are multiples of 8");
  }
  DctPlane out(static_cast<int>(samples.rows() / 8), static_cast<int>(samples.cols() / 8));
  for (int r = 0; r < out.block_rows(); ++r) {
    for (int c = 0; c < out.block_cols(); ++c) {
      out.block(r, c) = fdct8(samples.block<8, 8>(r * 8, c * 8));
    }
  }
  return out;
}

Plane pad_to_multiple(const Plane& samples, int multiple) {
  const Eigen::Index rows = (samples.rows() + multiple - 1) / multiple * multiple;
  const Eigen::Index cols = (samples.cols() + multiple - 1) / multiple * multiple;
  if (rows == samples.rows() && cols == samples.cols()) return samples;
  Plane out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index sr = std::min(r, samples.rows() - 1);
    for (Eigen::Index c = 0; c < cols; ++c) {
      out(r, c) = samples(sr, std::min(c, samples.cols() - 1));
    }
  }
  return out;
}

YCbCrPlanes rgb_to_ycbcr(const RgbImage& img) {
  YCbCrPlanes p{Plane(img.height, img.width), Plane(img.height, img.width), Plane(img.height, img.width)};
  for (int yy = 0; yy < img.height; ++yy) {
    for (int x = 0; x < img.width; ++x) {
      const double r = img.at(x, yy, 0);
      const double g = img.at(x, yy, 1);
      const double b = img.at(x, yy, 2);
      p.y(yy, x) = 0.299 * r + 0.587 * g + 0.114 * b;
      p.cb(yy, x) = -0.168735892 * r - 0.331264108 * g + 0.5 * b + 128.0;
      p.cr(yy, x) = 0.5 * r - 0.418687589 * g - 0.081312411 * b + 128.0;
    }
  }
  return p;
}

Plane luma(const RgbImage& img) {
  Plane y(img.height, img.width);
  for (int yy = 0; yy < img.height; ++yy) {
    for (int x = 0; x < img.width; ++x) {
      y(yy, x) = 0.299 * img.at(x, yy, 0) + 0.587 * img.at(x, yy, 1) + 0.114 * img.at(x, yy, 2);
    }
  }
  return y;
}

namespace {

inline std::uint8_t to_u8(double v) {
  const double r = std::round(v);  // half away from zero
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

}  // namespace

RgbImage ycbcr_to_rgb(const Plane& y, const Plane& cb, const Plane& cr, int width, int height) {
  if (cb.rows() != y.rows() || cr.rows() != y.rows() || cb.cols() != y.cols() || cr.cols() != y.cols()) {
    throw DimensionMismatch("Y, Cb and Cr planes must have equal dims");
  }
  if (width < 1 || height < 1 || width > y.cols() || height > y.rows()) {
    throw DimensionMismatch("output window exceeds plane dims");
  }
  RgbImage out(width, height);
  std::uint8_t* dst = out.samples.data();
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double yv = y(r, c);
      const double cbv = cb(r, c) - 128.0;
      const double crv = cr(r, c) - 128.0;
      *dst++ = to_u8(yv + 1.402 * crv);
      *dst++ = to_u8(yv - 0.344136 * cbv - 0.714136 * crv);
      *dst++ = to_u8(yv + 1.772 * cbv);
    }
  }
  return out;
}

RgbImage ycbcr_to_rgb(const Plane& y, const Plane& cb, const Plane& cr) {
  return ycbcr_to_rgb(y, cb, cr, static_cast<int>(y.cols()), static_cast<int>(y.rows()));
}

Plane chroma_upsample(const DctPlane& chroma, int factor) {
  if (factor != 2 && factor != 4) throw InvalidArgument("chroma upsample factor must be 2 or 4");
  DctPlane up = upsample_dct_x2(chroma);
  if (factor == 4) up = upsample_dct_x2(up);
  return idct_plane(up);
}

RgbImage reconstruct_rgb(const DctImage& img) {
  Plane y = idct_plane(img.y).array() + 128.0;
  Plane cb, cr;
  if (img.has_chroma()) {
    if (img.subsampling == Subsampling::k420) {
      cb = chroma_upsample(*img.cb, 2).array() + 128.0;
      cr = chroma_upsample(*img.cr, 2).array() + 128.0;
    } else {
      cb = idct_plane(*img.cb).array() + 128.0;
      cr = idct_plane(*img.cr).array() + 128.0;
    }
    if (cb.rows() != y.rows() || cb.cols() != y.cols() || cr.rows() != y.rows() || cr.cols() != y.cols()) {
      throw DimensionMismatch("chroma grid does not match luma grid");
    }
  } else {
    cb = Plane::Constant(y.rows(), y.cols(), 128.0);
    cr = cb;
  }
  return ycbcr_to_rgb(y, cb, cr, img.pixel_width, img.pixel_height);
}

}  // namespace freqsr
