#include "freqsr/bench.hpp"

#include <algorithm>
#include <ctime>
#include <random>

#include "freqsr/image_io.hpp"
#include "freqsr/jpeg.hpp"
#include "freqsr/parallel.hpp"
#include "freqsr/spatial.hpp"
#include "freqsr/synth.hpp"

namespace freqsr {

namespace fs = std::filesystem;

std::vector<CorpusItem> load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FormatError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (e.is_regular_file() && (ext == ".jpg" || ext == ".jpeg")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusItem> out;
  for (const auto& f : files) out.push_back({f.filename().string(), io::read_bytes(f)});
  return out;
}

std::vector<CorpusItem> synth_corpus(int count, std::uint64_t seed, int min_side, int max_side, int quality) {
  if (count < 1 || min_side < 16 || max_side < min_side) throw InvalidArgument("bad synthetic corpus parameters");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> side(min_side / 16, max_side / 16);
  std::vector<CorpusItem> out;
  for (int i = 0; i < count; ++i) {
    const int w = side(rng) * 16, h = side(rng) * 16;
    const RgbImage img = synth::photo_like(w, h, rng());
    out.push_back({"synth_" + std::to_string(i) + ".jpg", jpeg::encode_baseline(img, quality, Subsampling::k420)});
  }
  return out;
}

namespace {

// Times fn over the corpus with per-item latencies; returns the wall time.
template <typename Fn>
double timed_pass(const std::vector<CorpusItem>& corpus, int threads, std::vector<double>* latencies_ms, Fn fn) {
  std::vector<double> local(corpus.size());
  Stopwatch wall;
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    Stopwatch sw;
    fn(corpus[i].bytes);
    local[i] = sw.milliseconds();
  });
  const double seconds = wall.seconds();
  if (latencies_ms) latencies_ms->insert(latencies_ms->end(), local.begin(), local.end());
  return seconds;
}

volatile std::size_t g_sink = 0;

void decode_dct(const std::vector<std::uint8_t>& b) { g_sink = g_sink + jpeg::decode_to_dct(b).y.block_count(); }
void decode_rgb(const std::vector<std::uint8_t>& b) { g_sink = g_sink + jpeg::decode_to_rgb(b).samples.size(); }

}  // namespace

DecodeBenchResult bench_decode(const std::vector<CorpusItem>& corpus, const BenchDecodeOptions& opt) {
  if (opt.iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (opt.warmup < 0) throw InvalidArgument("warmup must be >= 0");
  if (corpus.empty()) throw EmptyDataset("empty corpus");
  DecodeBenchResult r;
  r.corpus_size = corpus.size();
  r.options = opt;
  r.options.threads = resolve_threads(opt.threads);
  for (int w = 0; w < opt.warmup; ++w) {
    timed_pass(corpus, r.options.threads, nullptr, decode_dct);
    timed_pass(corpus, r.options.threads, nullptr, decode_rgb);
  }
  std::vector<double> dct_ms, rgb_ms;
  double dct_wall = 0, rgb_wall = 0;
  for (int it = 0; it < opt.iterations; ++it) {
    dct_wall += timed_pass(corpus, r.options.threads, &dct_ms, decode_dct);
    rgb_wall += timed_pass(corpus, r.options.threads, &rgb_ms, decode_rgb);
  }
  const double frames = static_cast<double>(corpus.size()) * opt.iterations;
  r.dct = {summarize_latencies(dct_ms), fps(frames, dct_wall)};
  r.rgb = {summarize_latencies(rgb_ms), fps(frames, rgb_wall)};
  r.speedup = r.rgb.latency.mean_ms / r.dct.latency.mean_ms;
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

nlohmann::json path_json(const PathTiming& p) {
  return {{"mean_ms", p.latency.mean_ms},
          {"median_ms", p.latency.median_ms},
          {"p95_ms", p.latency.p95_ms},
          {"samples", p.latency.count},
          {"throughput_fps", p.throughput_fps}};
}

}  // namespace

nlohmann::json report_json(const DecodeBenchResult& r, const std::string& started, const std::string& finished) {
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "bench-decode"},
          {"started_at", started},
          {"finished_at", finished},
          {"threads", r.options.threads},
          {"warmup", r.options.warmup},
          {"iterations", r.options.iterations},
          {"corpus_size", r.corpus_size},
          {"paths", {{"dct", path_json(r.dct)}, {"rgb", path_json(r.rgb)}}},
          {"speedup", r.speedup},
          {"config", {{"io_excluded", true}}}};
}

nlohmann::json report_json(const TrainPipelineResult& r, const TrainPipelineOptions& opt, std::size_t manifest_size,
                           const std::string& started, const std::string& finished) {
  nlohmann::json epochs = nlohmann::json::array();
  for (std::size_t i = 0; i < r.epochs.size(); ++i) {
    const auto& e = r.epochs[i];
    epochs.push_back({{"epoch", i},
                      {"loss", e.loss},
                      {"load_seconds", e.load_seconds},
                      {"train_seconds", e.train_seconds},
                      {"loader_fps", e.loader_fps},
                      {"pipeline_fps", e.pipeline_fps}});
  }
  nlohmann::json j{{"schema_version", kReportSchemaVersion},
                   {"kind", "train"},
                   {"started_at", started},
                   {"finished_at", finished},
                   {"threads", r.threads},
                   {"warmup", 0},
                   {"corpus_size", manifest_size},
                   {"loader", loader_name(opt.loader)},
                   {"loader_fps", r.mean_loader_fps},
                   {"pipeline_fps", r.mean_pipeline_fps},
                   {"epochs", epochs},
                   {"config",
                    {{"patch_blocks", opt.patch_blocks},
                     {"epochs", opt.epochs},
                     {"lr", opt.lr},
                     {"seed", opt.seed},
                     {"feature_width", opt.model.feature_width},
                     {"depthwise_blocks", opt.model.depthwise_blocks},
                     {"standard_blocks", opt.model.standard_blocks},
                     {"parameters", opt.model.parameter_count()}}}};
  if (r.initial_loss >= 0) j["initial_loss"] = r.initial_loss;
  return j;
}

}  // namespace freqsr
