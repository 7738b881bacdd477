#pragma once

// Test-only bridge to the system libjpeg, used as an independent reference
// decoder/encoder. Nothing in the library links against it.

#include <cstdint>
#include <span>
#include <vector>

#include "freqsr/dct_model.hpp"

namespace freqsr::testing {

struct RefCoefficients {
  struct Component {
    int blocks_w = 0;
    int blocks_h = 0;
    std::vector<double> values;  // dequantized, natural order, block-major
  };
  int width = 0;
  int height = 0;
  std::vector<Component> components;
};

// Raw coefficient readout (jpeg_read_coefficients), dequantized.
RefCoefficients ref_read_coefficients(std::span<const std::uint8_t> bytes);

// Full RGB decode with the float IDCT.
RgbImage ref_decode_rgb(std::span<const std::uint8_t> bytes);

// Per-component 8-bit planes at native (subsampled) resolution, MCU padded.
struct RefRawPlanes {
  int width = 0;
  int height = 0;
  std::vector<Plane> planes;
};
RefRawPlanes ref_decode_raw(std::span<const std::uint8_t> bytes);

struct RefEncodeOptions {
  int quality = 100;
  bool subsample_420 = true;
  bool optimize_coding = false;
  int restart_interval = 0;  // in MCUs
  bool grayscale = false;
  bool progressive = false;
};
std::vector<std::uint8_t> ref_encode(const RgbImage& img, const RefEncodeOptions& opts);

}  // namespace freqsr::testing

namespace freqsr::testing {

// Reference RGB decode whose 4:2:0 chroma interpolation is the ideal
// cosine interpolation: libjpeg decodes each plane at native resolution
// (float IDCT, 8-bit rounding), then each 8x8 chroma tile is enlarged with a
// 16x8 matrix built here from the cosine definitions and the planes are
// converted with the JFIF equations.
RgbImage ref_decode_rgb_cosine_chroma(std::span<const std::uint8_t> bytes);

}  // namespace freqsr::testing
