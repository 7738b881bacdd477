#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "freqsr/metrics.hpp"
#include "freqsr/pipeline.hpp"

namespace freqsr {

inline constexpr int kReportSchemaVersion = 1;

struct CorpusItem {
  std::string name;
  std::vector<std::uint8_t> bytes;
};

// *.jpg / *.jpeg files read into memory, sorted by name.
std::vector<CorpusItem> load_corpus(const std::filesystem::path& dir);

// Procedural photos with sides drawn from multiples of 16 in
// [min_side, max_side], encoded as 4:2:0 baseline JPEGs.
std::vector<CorpusItem> synth_corpus(int count, std::uint64_t seed, int min_side = 256, int max_side = 1024,
                                     int quality = 100);

struct BenchDecodeOptions {
  int iterations = 1;
  int warmup = 1;
  int threads = 1;
};

struct PathTiming {
  LatencyStats latency;
  double throughput_fps = 0;  // images / wall second across workers
};

struct DecodeBenchResult {
  std::size_t corpus_size = 0;
  PathTiming dct;
  PathTiming rgb;
  double speedup = 0;  // rgb mean latency / dct mean latency
  BenchDecodeOptions options;
};

// Each iteration times decode_to_dct over the whole corpus, then
// decode_to_rgb over the same items in the same order. Warmup passes run
// both paths untimed.
DecodeBenchResult bench_decode(const std::vector<CorpusItem>& corpus, const BenchDecodeOptions& opt);

// Report builders. All carry schema_version, kind and UTC timestamps.
nlohmann::json report_json(const DecodeBenchResult& r, const std::string& started, const std::string& finished);
nlohmann::json report_json(const TrainPipelineResult& r, const TrainPipelineOptions& opt, std::size_t manifest_size,
                           const std::string& started, const std::string& finished);

std::string utc_timestamp();

}  // namespace freqsr
