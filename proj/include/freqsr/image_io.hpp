#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "freqsr/dct_model.hpp"

namespace freqsr::io {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// Binary PPM (P6), maxval 255.
RgbImage decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

// 8-bit non-interlaced PNG: grey, grey+alpha, RGB, RGBA (alpha dropped).
RgbImage decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const RgbImage& img);

// Dispatches on content: PPM, PNG or baseline JPEG.
RgbImage read_image(const std::filesystem::path& path);
// PNG for a .png extension, PPM otherwise.
void write_image(const std::filesystem::path& path, const RgbImage& img);

}  // namespace freqsr::io
