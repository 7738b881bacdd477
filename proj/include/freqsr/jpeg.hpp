#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "freqsr/dct_model.hpp"

namespace freqsr::jpeg {

// Position in natural (row-major) order of the k-th zigzag coefficient.
extern const std::array<int, 64> kZigzagToNatural;

struct QuantTable {
  int id = 0;
  std::array<std::uint16_t, 64> values{};  // zigzag order
};

enum class HuffmanClass { kDC = 0, kAC = 1 };

// Canonical JPEG Huffman table as carried in a DHT segment.
struct HuffmanTable {
  HuffmanClass table_class = HuffmanClass::kDC;
  int id = 0;
  std::array<std::uint8_t, 16> counts{};  // counts[i]: number of codes of length i + 1
  std::vector<std::uint8_t> symbols;

  struct Code {
    std::uint16_t bits = 0;
    std::uint8_t length = 0;  // 0 means the symbol has no code
  };
  // Code assigned to each symbol value; throws MalformedBitstream when the
  // table does not describe a valid canonical prefix code.
  std::array<Code, 256> encoder_codes() const;
};

struct FrameComponent {
  int id = 0;
  int h_samp = 1;
  int v_samp = 1;
  int quant_table_id = 0;
};

struct FrameInfo {
  int width = 0;
  int height = 0;
  int precision = 8;
  std::vector<FrameComponent> components;
};

// Annex-K tables (zigzag order) and the libjpeg quality scaling.
extern const HuffmanTable kStdDcLuma;
extern const HuffmanTable kStdAcLuma;
extern const HuffmanTable kStdDcChroma;
extern const HuffmanTable kStdAcChroma;
QuantTable scaled_quant_table(int id, int quality);

// Parses a baseline JPEG to dequantized, de-zigzagged coefficients.
// No inverse transform is applied.
DctImage decode_to_dct(std::span<const std::uint8_t> bytes);

// Same parse, also returning the frame header.
DctImage decode_to_dct(std::span<const std::uint8_t> bytes, FrameInfo& frame);

// Full decode: reconstruct_rgb(decode_to_dct(bytes)).
RgbImage decode_to_rgb(std::span<const std::uint8_t> bytes);

// Baseline JFIF encoder with Annex-K tables, no restart markers.
std::vector<std::uint8_t> encode_baseline(const RgbImage& img, int quality, Subsampling subsampling);

}  // namespace freqsr::jpeg
