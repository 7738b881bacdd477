#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "freqsr/dataset.hpp"
#include "freqsr/net.hpp"

namespace freqsr {

struct TrainPipelineOptions {
  int patch_blocks = 32;
  int epochs = 1;
  double lr = 1e-4;
  std::uint64_t seed = 0;
  LoaderKind loader = LoaderKind::kDct;
  int threads = 1;
  nn::FreqSrConfig model;
  // Also report the mean loss of the initial model on the first epoch's pairs.
  bool evaluate_initial = false;
};

struct EpochStats {
  double loss = 0;
  double load_seconds = 0;
  double train_seconds = 0;
  double loader_fps = 0;
  double pipeline_fps = 0;
};

struct TrainPipelineResult {
  nn::FreqSrModel model;
  std::vector<EpochStats> epochs;
  double initial_loss = -1;  // set when evaluate_initial
  double mean_loader_fps = 0;
  double mean_pipeline_fps = 0;
  int threads = 1;
};

using EpochCallback = std::function<void(int epoch, const EpochStats&)>;

// Each epoch loads every pair with the worker pool, then runs one Adam step
// per pair in a seeded shuffled order. Loader FPS counts only loading;
// pipeline FPS counts loading plus training.
TrainPipelineResult train_pipeline(const Manifest& manifest, const TrainPipelineOptions& opt,
                                   const EpochCallback& on_epoch = {});

// 2x super-resolution of a colour JPEG's coefficients: preprocess without
// cropping, forward, postprocess, then chroma interpolation to the new size.
// With no model the luma is pure DCT interpolation of the raw coefficients.
RgbImage super_resolve(const DctImage& lr, const nn::FreqSrModel* model, const NormParams& p = {});

}  // namespace freqsr
