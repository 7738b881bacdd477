#include <algorithm>
#include <array>
#include <cstring>
#include <optional>
#include <string>

#include "freqsr/jpeg.hpp"
#include "freqsr/spatial.hpp"

namespace freqsr::jpeg {
namespace {

constexpr int kLookaheadBits = 9;

// Canonical Huffman decoder with a 9-bit first-level lookup.
struct DecodeTable {
  bool defined = false;
  std::array<std::uint16_t, 1 << kLookaheadBits> fast{};  // (length << 8) | symbol, 0 = slow path
  std::array<std::int32_t, 18> maxcode{};
  std::array<std::int32_t, 17> valptr{};
  std::array<std::int32_t, 17> mincode{};
  std::array<std::uint8_t, 256> symbols{};

  void build(const HuffmanTable& t) {
    std::size_t total = 0;
    for (auto c : t.counts) total += c;
    if (total != t.symbols.size() || total > 256 || total == 0) {
      throw MalformedBitstream("Huffman table symbol count mismatch");
    }
    std::copy(t.symbols.begin(), t.symbols.end(), symbols.begin());
    fast.fill(0);
    std::int32_t code = 0;
    std::int32_t k = 0;
    for (int len = 1; len <= 16; ++len) {
      const int n = t.counts[len - 1];
      valptr[len] = k;
      mincode[len] = code;
      if (n == 0) {
        maxcode[len] = -1;
      } else {
        if (code + n > (1 << len)) throw MalformedBitstream("Huffman code space overflow");
        for (int i = 0; i < n; ++i, ++code, ++k) {
          if (len <= kLookaheadBits) {
            const int shift = kLookaheadBits - len;
            const int first = code << shift;
            for (int j = 0; j < (1 << shift); ++j) {
              fast[first + j] = static_cast<std::uint16_t>((len << 8) | t.symbols[k]);
            }
          }
        }
        maxcode[len] = code - 1;
      }
      code <<= 1;
    }
    maxcode[17] = 0x7fffffff;
    defined = true;
  }
};

// MSB-first entropy bit reader that un-stuffs 0xFF00 and stops at markers.
// Past a marker or the end of data it feeds zero bits and counts them, so a
// scan that consumes them is detected as truncated.
class BitReader {
 public:
  BitReader(const std::uint8_t* p, const std::uint8_t* end) : p_(p), end_(end) {}

  const std::uint8_t* position() const { return p_; }

  void reset(const std::uint8_t* p) {
    p_ = p;
    buf_ = 0;
    bits_ = 0;
    padding_ = 0;
    at_marker_ = false;
  }

  bool overran() const { return bits_ < padding_; }

  int decode(const DecodeTable& t) {
    if (bits_ < 16) fill();
    const auto peek = static_cast<std::uint32_t>(buf_ >> (64 - kLookaheadBits));
    const std::uint16_t e = t.fast[peek];
    if (e != 0) {
      consume(e >> 8);
      return e & 0xff;
    }
    for (int len = kLookaheadBits + 1; len <= 16; ++len) {
      const auto code = static_cast<std::int32_t>(buf_ >> (64 - len));
      if (code <= t.maxcode[len]) {
        consume(len);
        return t.symbols[t.valptr[len] + code - t.mincode[len]];
      }
    }
    throw MalformedBitstream("invalid Huffman code");
  }

  // Reads `s` magnitude bits and applies the JPEG sign extension.
  int receive_extend(int s) {
    if (s == 0) return 0;
    if (bits_ < s) fill();
    const auto v = static_cast<int>(buf_ >> (64 - s));
    consume(s);
    return v < (1 << (s - 1)) ? v - (1 << s) + 1 : v;
  }

 private:
  void consume(int n) {
    buf_ <<= n;
    bits_ -= n;
  }

  void fill() {
    while (bits_ <= 56) {
      std::uint64_t byte = 0;
      if (!at_marker_ && p_ < end_) {
        byte = *p_;
        if (byte == 0xFF) {
          if (p_ + 1 < end_ && p_[1] == 0x00) {
            p_ += 2;
          } else {
            at_marker_ = true;
            byte = 0;
            padding_ += 8;
          }
        } else {
          ++p_;
        }
      } else {
        padding_ += 8;
      }
      buf_ |= byte << (56 - bits_);
      bits_ += 8;
    }
  }

  const std::uint8_t* p_;
  const std::uint8_t* end_;
  std::uint64_t buf_ = 0;
  int bits_ = 0;
  int padding_ = 0;
  bool at_marker_ = false;
};

struct ComponentState {
  FrameComponent info;
  int blocks_w = 0;  // plane extent (MCU padded)
  int blocks_h = 0;
  int coded_w = 0;  // blocks actually coded in a non-interleaved scan
  int coded_h = 0;
  DctPlane plane;
  bool seen = false;
};

int ceil_div(int a, int b) { return (a + b - 1) / b; }

class Decoder {
 public:
  explicit Decoder(std::span<const std::uint8_t> bytes) : data_(bytes.data()), end_(bytes.data() + bytes.size()) {}

  DctImage run(FrameInfo& frame_out) {
    if (end_ - data_ < 4 || data_[0] != 0xFF || data_[1] != 0xD8) {
      throw MalformedBitstream("missing SOI marker");
    }
    const std::uint8_t* p = data_ + 2;
    bool eoi = false;
    while (!eoi) {
      p = next_marker(p);
      const int marker = p[1];
      p += 2;
      switch (marker) {
        case 0xD8:
          throw MalformedBitstream("unexpected SOI");
        case 0xD9:
          eoi = true;
          break;
        case 0xC0:
        case 0xC1:
          p = parse_sof(p);
          break;
        case 0xC2:
          throw UnsupportedMarker("progressive JPEG (SOF2)");
        case 0xC3:
        case 0xC5:
        case 0xC6:
        case 0xC7:
          throw UnsupportedMarker("lossless or hierarchical JPEG");
        case 0xC9:
        case 0xCA:
        case 0xCB:
        case 0xCD:
        case 0xCE:
        case 0xCF:
        case 0xCC:
          throw UnsupportedMarker("arithmetic-coded JPEG");
        case 0xC4:
          p = parse_dht(p);
          break;
        case 0xDB:
          p = parse_dqt(p);
          break;
        case 0xDD:
          p = parse_dri(p);
          break;
        case 0xDA:
          p = parse_sos_and_scan(p);
          break;
        case 0xDC:
          throw UnsupportedMarker("DNL marker");
        default:
          if ((marker >= 0xE0 && marker <= 0xEF) || marker == 0xFE || (marker >= 0xF0 && marker <= 0xFD)) {
            p = skip_segment(p);
          } else if (marker >= 0xD0 && marker <= 0xD7) {
            throw MalformedBitstream("restart marker outside of scan");
          } else {
            throw MalformedBitstream("unknown marker 0x" + hex(marker));
          }
      }
    }
    if (!frame_) throw MalformedBitstream("no frame header");
    for (const auto& c : comps_) {
      if (!c.seen) throw MalformedBitstream("component never coded in any scan");
    }
    frame_out = *frame_;
    return assemble();
  }

 private:
  static std::string hex(int v) {
    static const char* digits = "0123456789ABCDEF";
    return {digits[(v >> 4) & 15], digits[v & 15]};
  }

  const std::uint8_t* next_marker(const std::uint8_t* p) const {
    // Fill bytes (0xFF) may precede a marker.
    if (p >= end_ || *p != 0xFF) {
      if (p >= end_) throw MalformedBitstream("unexpected end of data (missing EOI)");
      throw MalformedBitstream("expected marker");
    }
    while (p + 1 < end_ && p[1] == 0xFF) ++p;
    if (p + 1 >= end_) throw MalformedBitstream("unexpected end of data (missing EOI)");
    return p;
  }

  // Returns [payload begin, payload end) of a length-prefixed segment.
  std::pair<const std::uint8_t*, const std::uint8_t*> segment(const std::uint8_t* p) const {
    if (end_ - p < 2) throw MalformedBitstream("truncated segment length");
    const int len = (p[0] << 8) | p[1];
    if (len < 2 || len > end_ - p) throw MalformedBitstream("bad marker length");
    return {p + 2, p + len};
  }

  const std::uint8_t* skip_segment(const std::uint8_t* p) const { return segment(p).second; }

  const std::uint8_t* parse_dqt(const std::uint8_t* p) {
    auto [q, e] = segment(p);
    while (q < e) {
      const int pq = *q >> 4;
      const int tq = *q & 15;
      ++q;
      if (tq > 3 || pq > 1) throw MalformedBitstream("bad DQT table spec");
      const int bytes = pq == 0 ? 64 : 128;
      if (e - q < bytes) throw MalformedBitstream("bad marker length in DQT");
      QuantTable t;
      t.id = tq;
      for (int k = 0; k < 64; ++k) {
        t.values[k] = pq == 0 ? q[k] : static_cast<std::uint16_t>((q[2 * k] << 8) | q[2 * k + 1]);
        if (t.values[k] == 0) throw MalformedBitstream("zero quantization entry");
      }
      q += bytes;
      quant_[tq] = t;
    }
    return e;
  }

  const std::uint8_t* parse_dht(const std::uint8_t* p) {
    auto [q, e] = segment(p);
    while (q < e) {
      if (e - q < 17) throw MalformedBitstream("bad marker length in DHT");
      const int tc = *q >> 4;
      const int th = *q & 15;
      if (tc > 1 || th > 3) throw MalformedBitstream("bad DHT table spec");
      ++q;
      HuffmanTable t;
      t.table_class = tc == 0 ? HuffmanClass::kDC : HuffmanClass::kAC;
      t.id = th;
      std::size_t total = 0;
      for (int i = 0; i < 16; ++i) {
        t.counts[i] = q[i];
        total += q[i];
      }
      q += 16;
      if (total > 256 || static_cast<std::size_t>(e - q) < total) throw MalformedBitstream("bad marker length in DHT");
      t.symbols.assign(q, q + total);
      q += total;
      (tc == 0 ? dc_ : ac_)[th].build(t);
    }
    return e;
  }

  const std::uint8_t* parse_dri(const std::uint8_t* p) {
    auto [q, e] = segment(p);
    if (e - q != 2) throw MalformedBitstream("bad marker length in DRI");
    restart_interval_ = (q[0] << 8) | q[1];
    return e;
  }

  const std::uint8_t* parse_sof(const std::uint8_t* p) {
    if (frame_) throw MalformedBitstream("multiple frame headers");
    auto [q, e] = segment(p);
    if (e - q < 6) throw MalformedBitstream("bad marker length in SOF");
    FrameInfo f;
    f.precision = q[0];
    f.height = (q[1] << 8) | q[2];
    f.width = (q[3] << 8) | q[4];
    const int n = q[5];
    if (f.precision != 8) throw UnsupportedMarker(std::to_string(f.precision) + "-bit precision");
    if (f.height == 0) throw UnsupportedMarker("height defined by DNL");
    if (f.width == 0) throw MalformedBitstream("zero image width");
    if (e - q != 6 + 3 * n) throw MalformedBitstream("bad marker length in SOF");
    if (n != 1 && n != 3) throw UnsupportedMarker(std::to_string(n) + "-component frame");
    q += 6;
    for (int i = 0; i < n; ++i, q += 3) {
      FrameComponent c;
      c.id = q[0];
      c.h_samp = q[1] >> 4;
      c.v_samp = q[1] & 15;
      c.quant_table_id = q[2];
      if (c.h_samp < 1 || c.h_samp > 4 || c.v_samp < 1 || c.v_samp > 4 || c.quant_table_id > 3) {
        throw MalformedBitstream("bad component spec in SOF");
      }
      f.components.push_back(c);
    }
    if (n == 3) {
      const auto& y = f.components[0];
      const bool chroma_ok = f.components[1].h_samp == 1 && f.components[1].v_samp == 1 &&
                             f.components[2].h_samp == 1 && f.components[2].v_samp == 1;
      const bool luma_ok = (y.h_samp == 1 && y.v_samp == 1) || (y.h_samp == 2 && y.v_samp == 2);
      if (!chroma_ok || !luma_ok) {
        throw UnsupportedSubsampling("sampling factors other than 4:4:4 or 4:2:0");
      }
      subsampling_ = y.h_samp == 2 ? Subsampling::k420 : Subsampling::k444;
    } else {
      // Single-component scans are always non-interleaved; the factors are moot.
      f.components[0].h_samp = 1;
      f.components[0].v_samp = 1;
    }
    hmax_ = vmax_ = 1;
    for (const auto& c : f.components) {
      hmax_ = std::max(hmax_, c.h_samp);
      vmax_ = std::max(vmax_, c.v_samp);
    }
    mcus_x_ = ceil_div(f.width, 8 * hmax_);
    mcus_y_ = ceil_div(f.height, 8 * vmax_);
    for (const auto& c : f.components) {
      ComponentState s;
      s.info = c;
      s.blocks_w = mcus_x_ * c.h_samp;
      s.blocks_h = mcus_y_ * c.v_samp;
      s.coded_w = ceil_div(ceil_div(f.width * c.h_samp, hmax_), 8);
      s.coded_h = ceil_div(ceil_div(f.height * c.v_samp, vmax_), 8);
      s.plane = DctPlane(s.blocks_h, s.blocks_w);
      comps_.push_back(std::move(s));
    }
    frame_ = f;
    return e;
  }

  struct ScanComponent {
    ComponentState* state;
    const DecodeTable* dc;
    const DecodeTable* ac;
    std::array<double, 64> quant;  // zigzag order
    int pred = 0;
  };

  const std::uint8_t* parse_sos_and_scan(const std::uint8_t* p) {
    if (!frame_) throw MalformedBitstream("SOS before SOF");
    auto [q, e] = segment(p);
    if (e - q < 1) throw MalformedBitstream("bad marker length in SOS");
    const int ns = q[0];
    if (ns < 1 || ns > 4 || e - q != 1 + 2 * ns + 3) throw MalformedBitstream("bad marker length in SOS");
    ++q;
    std::vector<ScanComponent> scan;
    for (int i = 0; i < ns; ++i, q += 2) {
      const int id = q[0];
      const int td = q[1] >> 4;
      const int ta = q[1] & 15;
      auto it = std::find_if(comps_.begin(), comps_.end(), [&](const ComponentState& c) { return c.info.id == id; });
      if (it == comps_.end()) throw MalformedBitstream("SOS references unknown component");
      if (td > 3 || ta > 3 || !dc_[td].defined || !ac_[ta].defined) {
        throw MalformedBitstream("SOS references undefined Huffman table");
      }
      const auto& qt = quant_[it->info.quant_table_id];
      if (!qt) throw MalformedBitstream("component references undefined quantization table");
      ScanComponent sc{&*it, &dc_[td], &ac_[ta], {}, 0};
      for (int k = 0; k < 64; ++k) sc.quant[k] = qt->values[k];
      it->seen = true;
      scan.push_back(sc);
    }
    if (q[0] != 0 || q[1] != 63 || q[2] != 0) throw UnsupportedMarker("non-baseline spectral selection");

    int blocks_per_mcu = 0;
    for (const auto& sc : scan) blocks_per_mcu += sc.state->info.h_samp * sc.state->info.v_samp;
    if (ns > 1 && blocks_per_mcu > 10) throw MalformedBitstream("too many blocks per MCU");

    BitReader br(e, end_);
    const long units_x = ns == 1 ? scan[0].state->coded_w : mcus_x_;
    const long units_y = ns == 1 ? scan[0].state->coded_h : mcus_y_;
    const long total = units_x * units_y;
    int rst_index = 0;
    for (long unit = 0; unit < total; ++unit) {
      if (restart_interval_ > 0 && unit > 0 && unit % restart_interval_ == 0) {
        if (br.overran()) throw MalformedBitstream("truncated scan");
        const std::uint8_t* m = br.position();
        while (m + 1 < end_ && m[0] == 0xFF && m[1] == 0xFF) ++m;
        if (m + 1 >= end_ || m[0] != 0xFF || m[1] != 0xD0 + (rst_index & 7)) {
          throw MalformedBitstream("missing restart marker");
        }
        ++rst_index;
        br.reset(m + 2);
        for (auto& sc : scan) sc.pred = 0;
      }
      const int ux = static_cast<int>(unit % units_x);
      const int uy = static_cast<int>(unit / units_x);
      if (ns == 1) {
        decode_block(br, scan[0], scan[0].state->plane.block_ptr(uy, ux));
      } else {
        for (auto& sc : scan) {
          const int h = sc.state->info.h_samp;
          const int v = sc.state->info.v_samp;
          for (int by = 0; by < v; ++by) {
            for (int bx = 0; bx < h; ++bx) {
              decode_block(br, sc, sc.state->plane.block_ptr(uy * v + by, ux * h + bx));
            }
          }
        }
      }
      if (br.overran()) throw MalformedBitstream("truncated scan");
    }
    // Resume marker parsing at the first marker after the entropy data.
    const std::uint8_t* m = br.position();
    while (m + 1 < end_ && !(m[0] == 0xFF && m[1] != 0x00 && (m[1] < 0xD0 || m[1] > 0xD7))) ++m;
    if (m + 1 >= end_) throw MalformedBitstream("unexpected end of data after scan");
    return m;
  }

  static void decode_block(BitReader& br, ScanComponent& sc, double* out) {
    const int s = br.decode(*sc.dc);
    if (s > 11) throw MalformedBitstream("DC magnitude category out of range");
    sc.pred += br.receive_extend(s);
    out[0] = sc.pred * sc.quant[0];
    for (int k = 1; k < 64;) {
      const int rs = br.decode(*sc.ac);
      const int r = rs >> 4;
      const int size = rs & 15;
      if (size == 0) {
        if (r != 15) break;  // EOB
        k += 16;
        continue;
      }
      k += r;
      if (k > 63 || size > 10) throw MalformedBitstream("AC coefficient index out of range");
      out[kZigzagToNatural[k]] = br.receive_extend(size) * sc.quant[k];
      ++k;
    }
  }

  DctImage assemble() {
    DctImage img;
    img.pixel_width = frame_->width;
    img.pixel_height = frame_->height;
    img.subsampling = subsampling_;
    img.y = std::move(comps_[0].plane);
    if (comps_.size() == 3) {
      img.cb = std::move(comps_[1].plane);
      img.cr = std::move(comps_[2].plane);
    }
    return img;
  }

  const std::uint8_t* data_;
  const std::uint8_t* end_;
  std::array<std::optional<QuantTable>, 4> quant_;
  std::array<DecodeTable, 4> dc_;
  std::array<DecodeTable, 4> ac_;
  std::optional<FrameInfo> frame_;
  std::vector<ComponentState> comps_;
  Subsampling subsampling_ = Subsampling::k444;
  int restart_interval_ = 0;
  int hmax_ = 1;
  int vmax_ = 1;
  int mcus_x_ = 0;
  int mcus_y_ = 0;
};

}  // namespace

DctImage decode_to_dct(std::span<const std::uint8_t> bytes, FrameInfo& frame) {
  return Decoder(bytes).run(frame);
}

DctImage decode_to_dct(std::span<const std::uint8_t> bytes) {
  FrameInfo frame;
  return decode_to_dct(bytes, frame);
}

RgbImage decode_to_rgb(std::span<const std::uint8_t> bytes) { return reconstruct_rgb(decode_to_dct(bytes)); }

}  // namespace freqsr::jpeg
