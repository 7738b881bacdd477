#pragma once

#include <cstdint>

#include "freqsr/dct_model.hpp"

namespace freqsr::synth {

// Left-to-right ramp, red rising, green falling, blue mid grey with a
// vertical ripple.
RgbImage gradient_card(int width, int height);

RgbImage uniform(int width, int height, std::uint8_t value);

// Deterministic procedural scene: smooth background, soft-edged shapes,
// textured patches and mild sensor-like noise.
RgbImage photo_like(int width, int height, std::uint64_t seed);

// Mean over scale x scale pixel boxes; dims must be divisible by scale.
RgbImage box_downsample(const RgbImage& img, int scale);

RgbImage crop(const RgbImage& img, int x0, int y0, int width, int height);

}  // namespace freqsr::synth
