#include "freqsr/image_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <string>

#include <zlib.h>

#include "binio.hpp"
#include "freqsr/jpeg.hpp"

namespace freqsr::io {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) { return detail::read_file(path.string()); }

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  detail::write_file(path.string(), bytes);
}

namespace {

// Next header token of a PNM file, skipping whitespace and comments.
int ppm_field(std::span<const std::uint8_t> b, std::size_t& pos) {
  for (;;) {
    while (pos < b.size() && std::isspace(b[pos])) ++pos;
    if (pos < b.size() && b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= b.size() || !std::isdigit(b[pos])) throw FormatError("PPM: bad header");
  long v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos++] - '0');
    if (v > 1 << 24) throw FormatError("PPM: header value too large");
  }
  return static_cast<int>(v);
}

}  // namespace

RgbImage decode_ppm(std::span<const std::uint8_t> b) {
  if (b.size() < 2 || b[0] != 'P' || b[1] != '6') throw FormatError("PPM: expected P6 magic");
  std::size_t pos = 2;
  const int w = ppm_field(b, pos), h = ppm_field(b, pos), maxval = ppm_field(b, pos);
  if (w < 1 || h < 1) throw FormatError("PPM: empty image");
  if (maxval != 255) throw FormatError("PPM: only maxval 255 is supported");
  if (pos >= b.size() || !std::isspace(b[pos])) throw FormatError("PPM: bad header terminator");
  ++pos;
  RgbImage img(w, h);
  if (b.size() - pos < img.samples.size()) throw FormatError("PPM: truncated pixel data");
  std::copy_n(b.begin() + static_cast<std::ptrdiff_t>(pos), img.samples.size(), img.samples.begin());
  return img;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  if (!img.valid() || img.width < 1 || img.height < 1) throw InvalidArgument("cannot write an empty image");
  const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.samples.begin(), img.samples.end());
  return out;
}

namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type, std::span<const std::uint8_t> data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  put_be32(out, static_cast<std::uint32_t>(crc32(0, out.data() + start, static_cast<uInt>(out.size() - start))));
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  return pb <= pc ? b : c;
}

}  // namespace

RgbImage decode_png(std::span<const std::uint8_t> b) {
  if (b.size() < 8 || !std::equal(kPngSignature.begin(), kPngSignature.end(), b.begin())) {
    throw FormatError("PNG: bad signature");
  }
  std::size_t pos = 8;
  std::uint32_t w = 0, h = 0;
  int color = -1;
  std::vector<std::uint8_t> idat;
  bool ended = false;
  while (!ended) {
    if (b.size() - pos < 12) throw FormatError("PNG: truncated chunk");
    const std::uint32_t len = be32(&b[pos]);
    if (len > b.size() - pos - 12) throw FormatError("PNG: truncated chunk");
    const std::string type(reinterpret_cast<const char*>(&b[pos + 4]), 4);
    const std::uint8_t* data = &b[pos + 8];
    if (crc32(0, &b[pos + 4], len + 4) != be32(data + len)) throw FormatError("PNG: CRC mismatch in " + type);
    if (type == "IHDR") {
      if (len != 13) throw FormatError("PNG: bad IHDR");
      w = be32(data);
      h = be32(data + 4);
      if (data[8] != 8) throw FormatError("PNG: only 8-bit samples are supported");
      color = data[9];
      if (data[12] != 0) throw FormatError("PNG: interlaced images are not supported");
      if (color != 0 && color != 2 && color != 4 && color != 6) throw FormatError("PNG: unsupported colour type");
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      ended = true;
    } else if (!(type[0] & 0x20)) {
      throw FormatError("PNG: unknown critical chunk " + type);
    }
    pos += 12 + len;
  }
  if (color < 0 || w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16)) throw FormatError("PNG: bad header");
  const int channels = color == 0 ? 1 : color == 2 ? 3 : color == 4 ? 2 : 4;
  const std::size_t stride = static_cast<std::size_t>(w) * channels;
  std::vector<std::uint8_t> raw((stride + 1) * h);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
      raw_len != raw.size()) {
    throw FormatError("PNG: corrupt image data");
  }
  std::vector<std::uint8_t> prev(stride, 0), cur(stride);
  RgbImage img(static_cast<int>(w), static_cast<int>(h));
  for (std::uint32_t y = 0; y < h; ++y) {
    const std::uint8_t* line = &raw[y * (stride + 1)];
    const int filter = line[0];
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= static_cast<std::size_t>(channels) ? cur[i - channels] : 0;
      const int up = prev[i];
      const int c = i >= static_cast<std::size_t>(channels) ? prev[i - channels] : 0;
      int pred = 0;
      switch (filter) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = up; break;
        case 3: pred = (a + up) / 2; break;
        case 4: pred = paeth(a, up, c); break;
        default: throw FormatError("PNG: bad filter type");
      }
      cur[i] = static_cast<std::uint8_t>(line[1 + i] + pred);
    }
    for (std::uint32_t x = 0; x < w; ++x) {
      const std::uint8_t* px = &cur[x * channels];
      for (int ch = 0; ch < 3; ++ch) img.at(static_cast<int>(x), static_cast<int>(y), ch) = channels < 3 ? px[0] : px[ch];
    }
    std::swap(prev, cur);
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  if (!img.valid() || img.width < 1 || img.height < 1) throw InvalidArgument("cannot write an empty image");
  const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
  std::vector<std::uint8_t> raw;
  raw.reserve((stride + 1) * img.height);
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);
    const auto* row = &img.samples[y * stride];
    raw.insert(raw.end(), row, row + stride);
  }
  uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> z(zlen);
  if (compress2(z.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw FormatError("PNG: compression failed");
  }
  z.resize(zlen);

  std::vector<std::uint8_t> out(kPngSignature.begin(), kPngSignature.end());
  std::vector<std::uint8_t> ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(img.width));
  put_be32(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", z);
  put_chunk(out, "IEND", {});
  return out;
}

RgbImage read_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_ppm(bytes);
  if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P') return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) return jpeg::decode_to_rgb(bytes);
  throw FormatError("unrecognised image format: " + path.string());
}

void write_image(const std::filesystem::path& path, const RgbImage& img) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  write_bytes(path, ext == ".png" ? encode_png(img) : encode_ppm(img));
}

}  // namespace freqsr::io
