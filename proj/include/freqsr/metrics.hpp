#pragma once

#include <chrono>
#include <limits>
#include <vector>

#include "freqsr/dct_model.hpp"

namespace freqsr {

// Returned by psnr() when the inputs are identical.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

double psnr(const Plane& a, const Plane& b, double max_value = 255.0);
double psnr(const RgbImage& a, const RgbImage& b, double max_value = 255.0);

// Mean SSIM over the valid region of an 11x11 Gaussian window (sigma 1.5).
double ssim(const Plane& a, const Plane& b);
// Mean of the per-channel SSIM values.
double ssim(const RgbImage& a, const RgbImage& b);

// Centred window, floor tie-break on odd margins.
RgbImage center_crop_px(const RgbImage& img, int size = 220);
Plane center_crop_px(const Plane& img, int size = 220);

enum class MetricPlane { kLuma, kRgb };

struct QualityScores {
  double psnr = 0;
  double ssim = 0;
};

// Crop both images then score on BT.601 luma (default) or on RGB.
QualityScores compare_images(const RgbImage& test, const RgbImage& reference, int crop = 220,
                             MetricPlane plane = MetricPlane::kLuma);

class Stopwatch {
 public:
  using Clock = std::chrono::steady_clock;

  Stopwatch() : start_(Clock::now()) {}
  void restart() { start_ = Clock::now(); }
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  double milliseconds() const { return seconds() * 1e3; }

 private:
  Clock::time_point start_;
};

// Adds the lifetime of the scope to an accumulator.
class ScopedTimer {
 public:
  explicit ScopedTimer(double& total_seconds) : total_(total_seconds) {}
  ~ScopedTimer() { total_ += watch_.seconds(); }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  double& total_;
  Stopwatch watch_;
};

double fps(double frames, double seconds);

struct LatencyStats {
  std::size_t count = 0;
  double mean_ms = 0;
  double median_ms = 0;
  double p95_ms = 0;
};

// Nearest-rank p95, midpoint median.
LatencyStats summarize_latencies(std::vector<double> samples_ms);
double mean(const std::vector<double>& values);

}  // namespace freqsr
