#include "freqsr/dctt.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "binio.hpp"

namespace freqsr::dctt {

constexpr std::uint8_t kVersion = 1;

std::size_t Tensor::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

Tensor from_plane(const DctPlane& plane, DType dtype) {
  Tensor t{dtype,
           {static_cast<std::uint32_t>(plane.block_rows()), static_cast<std::uint32_t>(plane.block_cols()), 8, 8},
           {plane.coeffs().begin(), plane.coeffs().end()}};
  return t;
}

DctPlane to_plane(const Tensor& t) {
  if (t.dims.size() != 4 || t.dims[2] != 8 || t.dims[3] != 8) throw FormatError("DCTT: not a coefficient plane");
  if (t.values.size() != t.element_count()) throw FormatError("DCTT: payload does not match dims");
  DctPlane p(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]));
  std::copy(t.values.begin(), t.values.end(), p.coeffs().begin());
  return p;
}

Tensor from_freq_tensor(const FreqTensor& f, DType dtype) {
  return {dtype,
          {static_cast<std::uint32_t>(f.rows()), static_cast<std::uint32_t>(f.cols()), kBlockArea},
          {f.values().begin(), f.values().end()}};
}

FreqTensor to_freq_tensor(const Tensor& t) {
  if (t.dims.size() != 3 || t.dims[2] != kBlockArea) throw FormatError("DCTT: not a frequency tensor");
  if (t.values.size() != t.element_count()) throw FormatError("DCTT: payload does not match dims");
  FreqTensor f(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), 0, 0);
  std::copy(t.values.begin(), t.values.end(), f.values().begin());
  f.fit_value_range();
  return f;
}

std::vector<std::uint8_t> encode(std::span<const Tensor> tensors) {
  detail::ByteWriter w;
  for (const Tensor& t : tensors) {
    if (t.dims.empty() || t.dims.size() > 255) throw InvalidArgument("DCTT: rank must be 1..255");
    if (t.values.size() != t.element_count()) throw InvalidArgument("DCTT: payload does not match dims");
    w.bytes("DCTT", 4);
    w.u8(kVersion);
    w.u8(static_cast<std::uint8_t>(t.dtype));
    w.u8(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) w.u32(d);
    for (double v : t.values) {
      switch (t.dtype) {
        case DType::kI32:
          if (v != std::trunc(v) || v < std::numeric_limits<std::int32_t>::min() ||
              v > std::numeric_limits<std::int32_t>::max()) {
            throw InvalidArgument("DCTT: value " + std::to_string(v) + " is not representable as i32");
          }
          w.i32(static_cast<std::int32_t>(v));
          break;
        case DType::kF32: w.f32(static_cast<float>(v)); break;
        case DType::kF64: w.f64(v); break;
      }
    }
  }
  return std::move(w.buffer());
}

std::vector<Tensor> decode(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "DCTT");
  std::vector<Tensor> out;
  do {
    if (r.str(4) != "DCTT") throw FormatError("DCTT: bad magic");
    if (const auto v = r.u8(); v != kVersion) throw FormatError("DCTT: unsupported version " + std::to_string(v));
    Tensor t;
    const auto dtype = r.u8();
    if (dtype > 2) throw FormatError("DCTT: unknown dtype " + std::to_string(dtype));
    t.dtype = static_cast<DType>(dtype);
    const auto ndim = r.u8();
    if (ndim == 0) throw FormatError("DCTT: zero rank");
    for (int i = 0; i < ndim; ++i) t.dims.push_back(r.u32());
    const std::size_t n = t.element_count();
    const std::size_t width = t.dtype == DType::kF64 ? 8 : 4;
    if (n > r.remaining() / width) throw FormatError("DCTT: truncated payload");
    t.values.resize(n);
    for (double& v : t.values) {
      switch (t.dtype) {
        case DType::kI32: v = r.i32(); break;
        case DType::kF32: v = r.f32(); break;
        case DType::kF64: v = r.f64(); break;
      }
    }
    out.push_back(std::move(t));
  } while (!r.done());
  return out;
}

void write(const std::filesystem::path& path, std::span<const Tensor> tensors) {
  detail::write_file(path.string(), encode(tensors));
}

std::vector<Tensor> read(const std::filesystem::path& path) { return decode(detail::read_file(path.string())); }

}  // namespace freqsr::dctt
