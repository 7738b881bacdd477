// freqsr command-line front end.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "freqsr/bench.hpp"
#include "freqsr/dctt.hpp"
#include "freqsr/image_io.hpp"
#include "freqsr/jpeg.hpp"
#include "freqsr/metrics.hpp"
#include "freqsr/parallel.hpp"
#include "freqsr/pipeline.hpp"
#include "freqsr/spatial.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void write_json(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  freqsr::io::write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// JSON has no infinity; identical images report null.
json db(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json scores_json(const freqsr::RgbImage& out, const freqsr::RgbImage& ref, int crop) {
  const auto y = freqsr::compare_images(out, ref, crop, freqsr::MetricPlane::kLuma);
  const auto rgb = freqsr::compare_images(out, ref, crop, freqsr::MetricPlane::kRgb);
  return {{"crop", crop},
          {"luma", {{"psnr", db(y.psnr)}, {"ssim", y.ssim}}},
          {"rgb", {{"psnr", db(rgb.psnr)}, {"ssim", rgb.ssim}}}};
}

struct DecodeArgs {
  std::string input, mode = "dct", out;
};

int run_decode(const DecodeArgs& a) {
  const auto bytes = freqsr::io::read_bytes(a.input);
  if (a.mode == "rgb") {
    freqsr::io::write_image(a.out, freqsr::jpeg::decode_to_rgb(bytes));
    return kExitOk;
  }
  const freqsr::DctImage img = freqsr::jpeg::decode_to_dct(bytes);
  std::vector<freqsr::dctt::Tensor> recs{freqsr::dctt::from_plane(img.y)};
  if (img.has_chroma()) {
    recs.push_back(freqsr::dctt::from_plane(*img.cb));
    recs.push_back(freqsr::dctt::from_plane(*img.cr));
  }
  freqsr::dctt::write(a.out, recs);
  std::cerr << "Y " << img.y.block_rows() << "x" << img.y.block_cols() << " blocks, " << img.pixel_width << "x"
            << img.pixel_height << " px\n";
  return kExitOk;
}

struct BenchArgs {
  std::string dir, json_out;
  int synth = 0, iterations = 3, warmup = 1, threads = 0;
  std::uint64_t seed = 1;
};

int run_bench(const BenchArgs& a) {
  if (a.dir.empty() == (a.synth == 0)) throw CLI::ValidationError("bench-decode", "give exactly one of --dir or --synth");
  const auto corpus = a.dir.empty() ? freqsr::synth_corpus(a.synth, a.seed) : freqsr::load_corpus(a.dir);
  const std::string started = freqsr::utc_timestamp();
  const auto r = freqsr::bench_decode(corpus, {a.iterations, a.warmup, a.threads});
  write_json(freqsr::report_json(r, started, freqsr::utc_timestamp()), a.json_out);
  std::cerr << "dct " << r.dct.latency.mean_ms << " ms, rgb " << r.rgb.latency.mean_ms << " ms, speedup "
            << r.speedup << "x over " << r.corpus_size << " images\n";
  return kExitOk;
}

struct DatasetArgs {
  std::string hr, out;
  int scale = 2, quality = 100;
};

int run_make_dataset(const DatasetArgs& a) {
  const auto m = freqsr::make_dataset(freqsr::list_images(a.hr), a.out, {a.scale, a.quality});
  std::cerr << m.entries.size() << " pairs written to " << (fs::path(a.out) / "manifest.json").string() << "\n";
  return kExitOk;
}

struct TrainArgs {
  std::string manifest, weights, loader = "dct", json_out;
  int patch_blocks = 32, epochs = 1, threads = 0, feature_width = 64, depthwise_blocks = 4, standard_blocks = 4;
  double lr = 1e-4;
  std::uint64_t seed = 0;
  bool eval_initial = false;
};

int run_train(const TrainArgs& a) {
  const freqsr::Manifest m = freqsr::read_manifest(a.manifest);
  freqsr::TrainPipelineOptions opt{.patch_blocks = a.patch_blocks,
                                   .epochs = a.epochs,
                                   .lr = a.lr,
                                   .seed = a.seed,
                                   .loader = freqsr::parse_loader(a.loader),
                                   .threads = a.threads,
                                   .model = {.feature_width = a.feature_width,
                                             .depthwise_blocks = a.depthwise_blocks,
                                             .standard_blocks = a.standard_blocks},
                                   .evaluate_initial = a.eval_initial};
  opt.model.validate();
  const std::string started = freqsr::utc_timestamp();
  const auto r = freqsr::train_pipeline(m, opt, [&](int epoch, const freqsr::EpochStats& s) {
    std::fprintf(stderr, "epoch %d/%d loss %.6f loader %.2f fps pipeline %.2f fps\n", epoch + 1, a.epochs, s.loss,
                 s.loader_fps, s.pipeline_fps);
  });
  if (r.initial_loss >= 0) std::fprintf(stderr, "initial loss %.6f\n", r.initial_loss);
  if (!a.weights.empty()) freqsr::nn::save_weights(r.model, a.weights);
  write_json(freqsr::report_json(r, opt, m.entries.size(), started, freqsr::utc_timestamp()),
             a.json_out.empty() ? "-" : a.json_out);
  return kExitOk;
}

struct SrArgs {
  std::string weights, input, out, report, ref;
  int crop = 220;
};

int run_sr(const SrArgs& a, bool with_model) {
  std::optional<freqsr::nn::FreqSrModel> model;
  if (with_model) model = freqsr::nn::load_weights(a.weights);
  const freqsr::DctImage lr = freqsr::jpeg::decode_to_dct(freqsr::io::read_bytes(a.input));
  freqsr::Stopwatch sw;
  const freqsr::RgbImage out = freqsr::super_resolve(lr, model ? &*model : nullptr);
  const double elapsed = sw.milliseconds();
  if (!a.out.empty()) freqsr::io::write_image(a.out, out);
  json j{{"schema_version", freqsr::kReportSchemaVersion},
         {"kind", with_model ? "infer" : "upsample"},
         {"input", a.input},
         {"output", a.out},
         {"input_width", lr.pixel_width},
         {"input_height", lr.pixel_height},
         {"output_width", out.width},
         {"output_height", out.height},
         {"elapsed_ms", elapsed}};
  if (!a.ref.empty()) j["metrics"] = scores_json(out, freqsr::io::read_image(a.ref), a.crop);
  if (!a.report.empty()) write_json(j, a.report);
  std::cerr << lr.pixel_width << "x" << lr.pixel_height << " -> " << out.width << "x" << out.height << "\n";
  return kExitOk;
}

struct MetricsArgs {
  std::string a, b, json_out = "-";
  int crop = 220;
};

int run_metrics(const MetricsArgs& a) {
  json j{{"schema_version", freqsr::kReportSchemaVersion}, {"kind", "metrics"}, {"input", a.a}, {"reference", a.b}};
  j["metrics"] = scores_json(freqsr::io::read_image(a.a), freqsr::io::read_image(a.b), a.crop);
  write_json(j, a.json_out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed-domain JPEG super-resolution toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "freqsr 0.1.0");

  DecodeArgs dec;
  auto* c_dec = app.add_subcommand("decode", "Decode a JPEG to DCT coefficients (DCTT) or pixels (PPM/PNG)");
  c_dec->add_option("input", dec.input, "Baseline JPEG")->required()->check(CLI::ExistingFile);
  c_dec->add_option("--mode", dec.mode)->check(CLI::IsMember({"dct", "rgb"}))->capture_default_str();
  c_dec->add_option("--out", dec.out, "Output file")->required();

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench-decode", "Time coefficient decode against full RGB decode");
  c_bench->add_option("--dir", bench.dir, "Directory of JPEGs")->check(CLI::ExistingDirectory);
  c_bench->add_option("--synth", bench.synth, "Synthesise N Q100 4:2:0 JPEGs (256..1024 px) instead")
      ->check(CLI::PositiveNumber);
  c_bench->add_option("--seed", bench.seed, "Seed for --synth")->capture_default_str();
  c_bench->add_option("--iterations", bench.iterations)->check(CLI::PositiveNumber)->capture_default_str();
  c_bench->add_option("--warmup", bench.warmup)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_bench->add_option("--threads", bench.threads, "Worker threads (default FREQSR_THREADS or all cores)");
  c_bench->add_option("--json", bench.json_out, "Report path (default stdout)");

  DatasetArgs ds;
  auto* c_ds = app.add_subcommand("make-dataset", "Build HR/LR JPEG pairs and a manifest");
  c_ds->add_option("--hr", ds.hr, "Directory of HR images (PPM, PNG, JPEG)")->required()->check(CLI::ExistingDirectory);
  c_ds->add_option("--scale", ds.scale)->check(CLI::Range(2, 8))->capture_default_str();
  c_ds->add_option("--quality", ds.quality)->check(CLI::Range(1, 100))->capture_default_str();
  c_ds->add_option("--out", ds.out)->required();

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Train the network on a manifest");
  c_tr->add_option("--manifest", tr.manifest)->required()->check(CLI::ExistingFile);
  c_tr->add_option("--patch-blocks", tr.patch_blocks, "LR patch size in blocks")->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_tr->add_option("--epochs", tr.epochs)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_tr->add_option("--lr", tr.lr, "Adam learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  c_tr->add_option("--seed", tr.seed)->capture_default_str();
  c_tr->add_option("--weights", tr.weights, "Output FSRW file");
  c_tr->add_option("--baseline-loader", tr.loader, "Data loader")->check(CLI::IsMember({"dct", "rgb"}))
      ->capture_default_str();
  c_tr->add_option("--threads", tr.threads, "Loader threads (default FREQSR_THREADS or all cores)");
  c_tr->add_option("--feature-width", tr.feature_width)->check(CLI::PositiveNumber)->capture_default_str();
  c_tr->add_option("--depthwise-blocks", tr.depthwise_blocks)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_tr->add_option("--standard-blocks", tr.standard_blocks)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_tr->add_flag("--eval-initial", tr.eval_initial, "Report the loss of the untrained model");
  c_tr->add_option("--json", tr.json_out, "Report path (default stdout)");

  SrArgs inf;
  auto* c_inf = app.add_subcommand("infer", "Super-resolve a JPEG 2x with trained weights");
  c_inf->add_option("--weights", inf.weights)->required()->check(CLI::ExistingFile);
  SrArgs up;
  auto* c_up = app.add_subcommand("upsample", "Model-free 2x DCT interpolation");
  for (auto [cmd, args] : {std::pair{c_inf, &inf}, std::pair{c_up, &up}}) {
    cmd->add_option("--input", args->input, "Colour baseline JPEG")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args->out, "Output image (.png or PPM)");
    cmd->add_option("--report", args->report, "Metrics JSON path");
    cmd->add_option("--ref", args->ref, "Reference HR image for PSNR/SSIM")->check(CLI::ExistingFile);
    cmd->add_option("--crop", args->crop, "Centre crop for metrics")->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  MetricsArgs met;
  auto* c_met = app.add_subcommand("metrics", "PSNR and SSIM between two images");
  c_met->add_option("a", met.a)->required()->check(CLI::ExistingFile);
  c_met->add_option("b", met.b)->required()->check(CLI::ExistingFile);
  c_met->add_option("--crop", met.crop)->check(CLI::PositiveNumber)->capture_default_str();
  c_met->add_option("--json", met.json_out, "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*c_dec) return run_decode(dec);
    if (*c_bench) return run_bench(bench);
    if (*c_ds) return run_make_dataset(ds);
    if (*c_tr) return run_train(tr);
    if (*c_inf) return run_sr(inf, true);
    if (*c_up) return run_sr(up, false);
    if (*c_met) return run_metrics(met);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const freqsr::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
