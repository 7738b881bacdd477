#include "freqsr/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "freqsr/spatial.hpp"

namespace freqsr {
namespace {

double psnr_from_mse(double mse, double max_value) {
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(max_value * max_value / mse);
}

Plane channel(const RgbImage& img, int ch) {
  Plane p(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) p(y, x) = img.at(x, y, ch);
  }
  return p;
}

void check_same(const RgbImage& a, const RgbImage& b) {
  if (a.width != b.width || a.height != b.height) throw DimensionMismatch("images differ in size");
}

constexpr int kWin = 11;

const std::array<double, kWin>& gaussian_window() {
  static const std::array<double, kWin> w = [] {
    std::array<double, kWin> g{};
    double sum = 0;
    for (int i = 0; i < kWin; ++i) {
      const double d = i - kWin / 2;
      g[i] = std::exp(-d * d / (2 * 1.5 * 1.5));
      sum += g[i];
    }
    for (double& v : g) v /= sum;
    return g;
  }();
  return w;
}

// Separable valid-region filtering.
Plane filter_valid(const Plane& p) {
  const auto& g = gaussian_window();
  const Eigen::Index oh = p.rows() - kWin + 1, ow = p.cols() - kWin + 1;
  Plane rows(p.rows(), ow);
  for (Eigen::Index y = 0; y < p.rows(); ++y) {
    for (Eigen::Index x = 0; x < ow; ++x) {
      double acc = 0;
      for (int k = 0; k < kWin; ++k) acc += g[k] * p(y, x + k);
      rows(y, x) = acc;
    }
  }
  Plane out(oh, ow);
  for (Eigen::Index y = 0; y < oh; ++y) {
    for (Eigen::Index x = 0; x < ow; ++x) {
      double acc = 0;
      for (int k = 0; k < kWin; ++k) acc += g[k] * rows(y + k, x);
      out(y, x) = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const Plane& a, const Plane& b, double max_value) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("planes differ in size");
  if (a.size() == 0) throw TooSmall("psnr of empty planes");
  return psnr_from_mse((a - b).squaredNorm() / static_cast<double>(a.size()), max_value);
}

double psnr(const RgbImage& a, const RgbImage& b, double max_value) {
  check_same(a, b);
  if (a.samples.empty()) throw TooSmall("psnr of empty images");
  double sse = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d = static_cast<double>(a.samples[i]) - b.samples[i];
    sse += d * d;
  }
  return psnr_from_mse(sse / static_cast<double>(a.samples.size()), max_value);
}

double ssim(const Plane& a, const Plane& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("planes differ in size");
  if (a.rows() < kWin || a.cols() < kWin) throw TooSmall("ssim needs at least 11x11 samples");
  const double c1 = (0.01 * 255) * (0.01 * 255);
  const double c2 = (0.03 * 255) * (0.03 * 255);
  const Plane mu_a = filter_valid(a);
  const Plane mu_b = filter_valid(b);
  const Plane e_aa = filter_valid(a.cwiseProduct(a));
  const Plane e_bb = filter_valid(b.cwiseProduct(b));
  const Plane e_ab = filter_valid(a.cwiseProduct(b));
  double sum = 0;
  for (Eigen::Index i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a.data()[i], mb = mu_b.data()[i];
    const double va = e_aa.data()[i] - ma * ma;
    const double vb = e_bb.data()[i] - mb * mb;
    const double cov = e_ab.data()[i] - ma * mb;
    sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return sum / static_cast<double>(mu_a.size());
}

double ssim(const RgbImage& a, const RgbImage& b) {
  check_same(a, b);
  double s = 0;
  for (int ch = 0; ch < 3; ++ch) s += ssim(channel(a, ch), channel(b, ch));
  return s / 3.0;
}

RgbImage center_crop_px(const RgbImage& img, int size) {
  if (size < 1 || size > img.width || size > img.height) {
    throw TooSmall("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                   " is smaller than a " + std::to_string(size) + " crop");
  }
  const int x0 = (img.width - size) / 2, y0 = (img.height - size) / 2;
  RgbImage out(size, size);
  for (int y = 0; y < size; ++y) {
    const auto* src = &img.samples[(static_cast<std::size_t>(y0 + y) * img.width + x0) * 3];
    std::copy(src, src + static_cast<std::size_t>(size) * 3, &out.samples[static_cast<std::size_t>(y) * size * 3]);
  }
  return out;
}

Plane center_crop_px(const Plane& img, int size) {
  if (size < 1 || size > img.cols() || size > img.rows()) throw TooSmall("plane is smaller than the crop");
  return img.block((img.rows() - size) / 2, (img.cols() - size) / 2, size, size);
}

QualityScores compare_images(const RgbImage& test, const RgbImage& reference, int crop, MetricPlane plane) {
  check_same(test, reference);
  const RgbImage a = center_crop_px(test, crop);
  const RgbImage b = center_crop_px(reference, crop);
  if (plane == MetricPlane::kRgb) return {psnr(a, b), ssim(a, b)};
  const Plane ya = luma(a), yb = luma(b);
  return {psnr(ya, yb), ssim(ya, yb)};
}

double fps(double frames, double seconds) {
  if (!(seconds > 0)) throw InvalidArgument("fps needs a positive elapsed time");
  return frames / seconds;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("mean of an empty list");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

LatencyStats summarize_latencies(std::vector<double> samples_ms) {
  if (samples_ms.empty()) throw InvalidArgument("no latency samples");
  std::sort(samples_ms.begin(), samples_ms.end());
  const std::size_t n = samples_ms.size();
  LatencyStats s;
  s.count = n;
  s.mean_ms = mean(samples_ms);
  s.median_ms = n % 2 ? samples_ms[n / 2] : 0.5 * (samples_ms[n / 2 - 1] + samples_ms[n / 2]);
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95_ms = samples_ms[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

}  // namespace freqsr
