#include <cmath>

#include "freqsr/jpeg.hpp"
#include "freqsr/spatial.hpp"
#include "freqsr/transforms.hpp"

namespace freqsr::jpeg {
namespace {

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t bits, int count) {
    acc_ = (acc_ << count) | (bits & ((1u << count) - 1));
    n_ += count;
    while (n_ >= 8) {
      const auto byte = static_cast<std::uint8_t>(acc_ >> (n_ - 8));
      out_.push_back(byte);
      if (byte == 0xFF) out_.push_back(0x00);
      n_ -= 8;
    }
  }

  // Pads the last byte with one-bits.
  void flush() {
    if (n_ > 0) put(0x7F, 8 - n_);
  }

 private:
  std::vector<std::uint8_t>& out_;
  std::uint64_t acc_ = 0;
  int n_ = 0;
};

void put_u16(std::vector<std::uint8_t>& out, int v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_marker(std::vector<std::uint8_t>& out, int marker) {
  out.push_back(0xFF);
  out.push_back(static_cast<std::uint8_t>(marker));
}

void write_dht(std::vector<std::uint8_t>& out, const HuffmanTable& t) {
  out.push_back(static_cast<std::uint8_t>((static_cast<int>(t.table_class) << 4) | t.id));
  out.insert(out.end(), t.counts.begin(), t.counts.end());
  out.insert(out.end(), t.symbols.begin(), t.symbols.end());
}

int magnitude_category(int v) {
  int a = v < 0 ? -v : v;
  int n = 0;
  while (a) {
    ++n;
    a >>= 1;
  }
  return n;
}

struct EntropyTables {
  std::array<HuffmanTable::Code, 256> dc;
  std::array<HuffmanTable::Code, 256> ac;
};

void encode_block(BitWriter& bw, const std::array<int, 64>& zz, int& pred, const EntropyTables& t) {
  const int diff = zz[0] - pred;
  pred = zz[0];
  const int s = magnitude_category(diff);
  bw.put(t.dc[s].bits, t.dc[s].length);
  if (s) bw.put(diff < 0 ? diff - 1 : diff, s);

  int run = 0;
  for (int k = 1; k < 64; ++k) {
    const int v = zz[k];
    if (v == 0) {
      ++run;
      continue;
    }
    while (run > 15) {
      bw.put(t.ac[0xF0].bits, t.ac[0xF0].length);
      run -= 16;
    }
    const int size = magnitude_category(v);
    const int sym = (run << 4) | size;
    bw.put(t.ac[sym].bits, t.ac[sym].length);
    bw.put(v < 0 ? v - 1 : v, size);
    run = 0;
  }
  if (run > 0) bw.put(t.ac[0x00].bits, t.ac[0x00].length);
}

// Forward DCT of the 8x8 window at (bx, by), quantized to zigzag order.
std::array<int, 64> quantize_block(const Plane& samples, int bx, int by, const QuantTable& q) {
  const Block8<double> spatial = samples.block<8, 8>(by * 8, bx * 8).array() - 128.0;
  const Block8<double> coeffs = fdct8(spatial);
  std::array<int, 64> zz{};
  for (int k = 0; k < 64; ++k) {
    const double c = coeffs.data()[kZigzagToNatural[k]];
    long v = std::lround(c / q.values[k]);
    const long limit = k == 0 ? 2047 : 1023;
    zz[k] = static_cast<int>(std::clamp(v, -limit, limit));
  }
  return zz;
}

Plane box_half(const Plane& p) {
  Plane out(p.rows() / 2, p.cols() / 2);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      out(r, c) = 0.25 * (p(2 * r, 2 * c) + p(2 * r, 2 * c + 1) + p(2 * r + 1, 2 * c) + p(2 * r + 1, 2 * c + 1));
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_baseline(const RgbImage& img, int quality, Subsampling subsampling) {
  if (img.width < 1 || img.height < 1 || img.width > 65535 || img.height > 65535 || !img.valid()) {
    throw InvalidArgument("image dimensions must be in [1, 65535]");
  }
  const QuantTable q_luma = scaled_quant_table(0, quality);
  const QuantTable q_chroma = scaled_quant_table(1, quality);
  const bool sub = subsampling == Subsampling::k420;
  const int mcu = sub ? 16 : 8;

  YCbCrPlanes ycc = rgb_to_ycbcr(img);
  const Plane y = pad_to_multiple(ycc.y, mcu);
  Plane cb = pad_to_multiple(ycc.cb, mcu);
  Plane cr = pad_to_multiple(ycc.cr, mcu);
  if (sub) {
    cb = box_half(cb);
    cr = box_half(cr);
  }

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(img.width) * img.height * 2 + 1024);
  put_marker(out, 0xD8);

  put_marker(out, 0xE0);
  put_u16(out, 16);
  for (char ch : {'J', 'F', 'I', 'F', '\0'}) out.push_back(static_cast<std::uint8_t>(ch));
  out.insert(out.end(), {1, 1, 0, 0, 1, 0, 1, 0, 0});

  put_marker(out, 0xDB);
  put_u16(out, 2 + 2 * 65);
  for (const QuantTable* q : {&q_luma, &q_chroma}) {
    out.push_back(static_cast<std::uint8_t>(q->id));
    for (auto v : q->values) out.push_back(static_cast<std::uint8_t>(v));
  }

  put_marker(out, 0xC0);
  put_u16(out, 8 + 3 * 3);
  out.push_back(8);
  put_u16(out, img.height);
  put_u16(out, img.width);
  out.push_back(3);
  out.insert(out.end(), {1, static_cast<std::uint8_t>(sub ? 0x22 : 0x11), 0, 2, 0x11, 1, 3, 0x11, 1});

  put_marker(out, 0xC4);
  put_u16(out, 2 + 4 * 17 + 12 + 162 + 12 + 162);
  write_dht(out, kStdDcLuma);
  write_dht(out, kStdAcLuma);
  write_dht(out, kStdDcChroma);
  write_dht(out, kStdAcChroma);

  put_marker(out, 0xDA);
  put_u16(out, 6 + 2 * 3);
  out.insert(out.end(), {3, 1, 0x00, 2, 0x11, 3, 0x11, 0, 63, 0});

  const EntropyTables luma_tables{kStdDcLuma.encoder_codes(), kStdAcLuma.encoder_codes()};
  const EntropyTables chroma_tables{kStdDcChroma.encoder_codes(), kStdAcChroma.encoder_codes()};

  BitWriter bw(out);
  int pred_y = 0, pred_cb = 0, pred_cr = 0;
  const int mcus_x = static_cast<int>(y.cols()) / mcu;
  const int mcus_y = static_cast<int>(y.rows()) / mcu;
  const int luma_blocks = sub ? 2 : 1;
  for (int my = 0; my < mcus_y; ++my) {
    for (int mx = 0; mx < mcus_x; ++mx) {
      for (int by = 0; by < luma_blocks; ++by) {
        for (int bx = 0; bx < luma_blocks; ++bx) {
          encode_block(bw, quantize_block(y, mx * luma_blocks + bx, my * luma_blocks + by, q_luma), pred_y,
                       luma_tables);
        }
      }
      encode_block(bw, quantize_block(cb, mx, my, q_chroma), pred_cb, chroma_tables);
      encode_block(bw, quantize_block(cr, mx, my, q_chroma), pred_cr, chroma_tables);
    }
  }
  bw.flush();
  put_marker(out, 0xD9);
  return out;
}

}  // namespace freqsr::jpeg
