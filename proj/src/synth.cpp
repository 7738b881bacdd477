#include "freqsr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace freqsr::synth {
namespace {

std::uint8_t clamp_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

}  // namespace

RgbImage gradient_card(int width, int height) {
  RgbImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double t = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
      img.at(x, y, 0) = clamp_u8(255.0 * t);
      img.at(x, y, 1) = clamp_u8(255.0 * (1.0 - t));
      img.at(x, y, 2) = clamp_u8(128.0 + 60.0 * std::sin(2.0 * std::numbers::pi * y / 37.0));
    }
  }
  return img;
}

RgbImage uniform(int width, int height, std::uint8_t value) { return RgbImage(width, height, value); }

RgbImage photo_like(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 2.0);

  std::vector<double> px(static_cast<std::size_t>(width) * height * 3);
  // Background: two-colour bilinear blend.
  double corner[4][3];
  for (auto& c : corner) {
    for (double& ch : c) ch = 40.0 + 170.0 * u(rng);
  }
  for (int y = 0; y < height; ++y) {
    const double fy = static_cast<double>(y) / std::max(1, height - 1);
    for (int x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x) / std::max(1, width - 1);
      for (int ch = 0; ch < 3; ++ch) {
        px[(static_cast<std::size_t>(y) * width + x) * 3 + ch] =
            (1 - fy) * ((1 - fx) * corner[0][ch] + fx * corner[1][ch]) +
            fy * ((1 - fx) * corner[2][ch] + fx * corner[3][ch]);
      }
    }
  }

  // Soft-edged ellipses with a sinusoidal texture inside some of them.
  const int shapes = 6 + static_cast<int>(u(rng) * 8);
  for (int s = 0; s < shapes; ++s) {
    const double cx = u(rng) * width;
    const double cy = u(rng) * height;
    const double rx = (0.05 + 0.25 * u(rng)) * width;
    const double ry = (0.05 + 0.25 * u(rng)) * height;
    const double edge = 0.5 + 3.0 * u(rng);
    const double color[3] = {255.0 * u(rng), 255.0 * u(rng), 255.0 * u(rng)};
    const bool textured = u(rng) < 0.5;
    const double freq = 0.05 + 0.4 * u(rng);
    const double angle = std::numbers::pi * u(rng);
    const double amp = 10.0 + 30.0 * u(rng);
    const int x0 = std::max(0, static_cast<int>(cx - rx - 4 * edge));
    const int x1 = std::min(width, static_cast<int>(cx + rx + 4 * edge) + 1);
    const int y0 = std::max(0, static_cast<int>(cy - ry - 4 * edge));
    const int y1 = std::min(height, static_cast<int>(cy + ry + 4 * edge) + 1);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const double dx = (x - cx) / rx;
        const double dy = (y - cy) / ry;
        const double dist = (std::sqrt(dx * dx + dy * dy) - 1.0) * std::min(rx, ry);
        const double alpha = 1.0 / (1.0 + std::exp(dist / edge));
        if (alpha < 1e-4) continue;
        const double tex =
            textured ? amp * std::sin(freq * (x * std::cos(angle) + y * std::sin(angle))) : 0.0;
        for (int ch = 0; ch < 3; ++ch) {
          double& p = px[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
          p = (1 - alpha) * p + alpha * (color[ch] + tex);
        }
      }
    }
  }

  RgbImage img(width, height);
  for (std::size_t i = 0; i < px.size(); ++i) img.samples[i] = clamp_u8(px[i] + noise(rng));
  return img;
}

RgbImage box_downsample(const RgbImage& img, int scale) {
  if (scale < 1 || img.width % scale != 0 || img.height % scale != 0) {
    throw InvalidArgument("image dims must be divisible by the downsampling scale");
  }
  RgbImage out(img.width / scale, img.height / scale);
  const double inv = 1.0 / (scale * scale);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int ch = 0; ch < 3; ++ch) {
        int sum = 0;
        for (int dy = 0; dy < scale; ++dy) {
          for (int dx = 0; dx < scale; ++dx) sum += img.at(x * scale + dx, y * scale + dy, ch);
        }
        out.at(x, y, ch) = clamp_u8(sum * inv);
      }
    }
  }
  return out;
}

RgbImage crop(const RgbImage& img, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 1 || height < 1 || x0 + width > img.width || y0 + height > img.height) {
    throw DimensionMismatch("crop window leaves the image");
  }
  RgbImage out(width, height);
  for (int y = 0; y < height; ++y) {
    const auto* src = &img.samples[(static_cast<std::size_t>(y0 + y) * img.width + x0) * 3];
    std::copy(src, src + static_cast<std::size_t>(width) * 3, &out.samples[static_cast<std::size_t>(y) * width * 3]);
  }
  return out;
}

}  // namespace freqsr::synth
