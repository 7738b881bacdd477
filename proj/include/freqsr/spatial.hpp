#pragma once

#include "freqsr/dct_model.hpp"

namespace freqsr {

// Per-block inverse DCT of a whole plane. No level shift.
Plane idct_plane(const DctPlane& plane);

// Per-block forward DCT; plane dims must be multiples of 8. No level shift.
DctPlane fdct_plane(const Plane& samples);

// Edge-replicates a plane up to a multiple of `multiple` on both axes.
Plane pad_to_multiple(const Plane& samples, int multiple);

struct YCbCrPlanes {
  Plane y;
  Plane cb;
  Plane cr;
};

// JFIF full-range BT.601, unrounded.
YCbCrPlanes rgb_to_ycbcr(const RgbImage& img);

// BT.601 luma of every pixel, unrounded.
Plane luma(const RgbImage& img);

// JFIF full-range conversion of equally sized planes, rounded half away from
// zero and clamped to [0, 255].
RgbImage ycbcr_to_rgb(const Plane& y, const Plane& cb, const Plane& cr);

// Same, over the top-left width x height window of the planes.
RgbImage ycbcr_to_rgb(const Plane& y, const Plane& cb, const Plane& cr, int width, int height);

// Enlarges a chroma plane by `factor` (2 or 4) with DCT-domain zero-pad
// interpolation and returns spatial samples (no level shift).
Plane chroma_upsample(const DctPlane& chroma, int factor);

// IDCT + level shift, chroma upsampling to luma resolution, colour
// conversion and trimming to the true pixel size. Grayscale images are
// rendered with neutral chroma.
RgbImage reconstruct_rgb(const DctImage& img);

}  // namespace freqsr
