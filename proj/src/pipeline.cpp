#include "freqsr/pipeline.hpp"

#include <numeric>
#include <random>

#include "freqsr/metrics.hpp"
#include "freqsr/parallel.hpp"
#include "freqsr/spatial.hpp"

namespace freqsr {

TrainPipelineResult train_pipeline(const Manifest& manifest, const TrainPipelineOptions& opt,
                                   const EpochCallback& on_epoch) {
  if (manifest.entries.empty()) throw EmptyDataset("manifest has no pairs");
  if (opt.epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (opt.patch_blocks < 1) throw InvalidArgument("patch size must be >= 1 block");
  if (manifest.scale != 2) throw InvalidArgument("only 2x manifests are supported");
  TrainPipelineResult result{nn::init_model(opt.model, opt.seed), {}, -1, 0, 0, resolve_threads(opt.threads)};
  std::mt19937_64 shuffle_rng(opt.seed ^ 0x5DEECE66DULL);
  const nn::AdamOptions adam{.lr = opt.lr};
  const std::size_t n = manifest.entries.size();
  std::vector<nn::TrainingPair> pairs(n);
  std::vector<std::size_t> order(n);

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    EpochStats st;
    {
      ScopedTimer t(st.load_seconds);
      parallel_for(n, result.threads, [&](std::size_t i) {
        pairs[i] = load_pair(manifest.entries[i], opt.loader, opt.patch_blocks);
      });
    }
    if (epoch == 0 && opt.evaluate_initial) {
      double sum = 0;
      for (const auto& p : pairs) sum += nn::l1_loss(nn::forward(result.model, p.input), p.target).loss;
      result.initial_loss = sum / static_cast<double>(n);
    }
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0;
    {
      ScopedTimer t(st.train_seconds);
      for (std::size_t i : order) loss_sum += nn::train_step(result.model, pairs[i].input, pairs[i].target, adam);
    }
    st.loss = loss_sum / static_cast<double>(n);
    st.loader_fps = fps(static_cast<double>(n), st.load_seconds);
    st.pipeline_fps = fps(static_cast<double>(n), st.load_seconds + st.train_seconds);
    result.epochs.push_back(st);
    if (on_epoch) on_epoch(epoch, st);
  }
  if (!result.epochs.empty()) {
    std::vector<double> loader, pipeline;
    for (const auto& e : result.epochs) {
      loader.push_back(e.loader_fps);
      pipeline.push_back(e.pipeline_fps);
    }
    result.mean_loader_fps = mean(loader);
    result.mean_pipeline_fps = mean(pipeline);
  }
  return result;
}

RgbImage super_resolve(const DctImage& lr, const nn::FreqSrModel* model, const NormParams& p) {
  if (!lr.has_chroma()) throw MissingChroma("super-resolution needs a colour JPEG");
  // Without a network the interpolation runs on raw coefficients: the
  // normalisation offset lands on every coefficient, and upsampling that
  // offset does not give it back.
  const DctPlane y_hr = model ? postprocess_hr(nn::to_freq_tensor(nn::forward(*model, nn::to_tensor(
                                                   preprocess_full(lr, p)))),
                                               p)
                              : upsample_dct_x2(lr.y);
  const int factor = lr.subsampling == Subsampling::k420 ? 4 : 2;
  const Plane y = idct_plane(y_hr).array() + 128.0;
  const Plane cb = chroma_upsample(*lr.cb, factor).array() + 128.0;
  const Plane cr = chroma_upsample(*lr.cr, factor).array() + 128.0;
  if (cb.rows() != y.rows() || cb.cols() != y.cols()) throw DimensionMismatch("chroma grid does not match luma grid");
  return ycbcr_to_rgb(y, cb, cr, 2 * lr.pixel_width, 2 * lr.pixel_height);
}

}  // namespace freqsr
