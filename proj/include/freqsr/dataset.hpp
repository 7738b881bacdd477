#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "freqsr/dct_model.hpp"
#include "freqsr/freq_ops.hpp"
#include "freqsr/net.hpp"

namespace freqsr {

struct ManifestEntry {
  std::string name;
  std::filesystem::path hr;  // absolute after read_manifest
  std::filesystem::path lr;
  int source_width = 0;
  int source_height = 0;
  int hr_width = 0;
  int hr_height = 0;
  int lr_width = 0;
  int lr_height = 0;
  bool trimmed = false;
};

struct Manifest {
  int scale = 2;
  int quality = 100;
  std::vector<ManifestEntry> entries;
};

struct DatasetOptions {
  int scale = 2;
  int quality = 100;
};

// For every source image: trim to multiples of 16*scale (dropping the right
// and bottom edges), box-downsample by scale, write HR and LR as 4:2:0
// baseline JPEGs and a manifest.json next to them.
Manifest make_dataset(const std::vector<std::filesystem::path>& sources, const std::filesystem::path& out_dir,
                      const DatasetOptions& opt = {});
// All PPM, PNG and JPEG files in a directory, sorted by name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

void write_manifest(const Manifest& m, const std::filesystem::path& path);
// Entry paths are resolved against the manifest's directory.
Manifest read_manifest(const std::filesystem::path& path);

enum class LoaderKind { kDct, kRgb };

LoaderKind parse_loader(const std::string& name);
const char* loader_name(LoaderKind kind);

// Supervision target: the HR luma blocks under the LR crop (origin and size
// doubled), normalised and blockified.
FreqTensor hr_target(const DctPlane& hr_y, BlockOrigin lr_origin, int patch_blocks, const NormParams& p = {});

// Luma DCT planes rebuilt from a full pixel decode (the baseline loader).
DctPlane luma_dct_from_rgb(const RgbImage& img);

// Reads both files and builds one training pair. The dct loader stays in
// the coefficient domain; the rgb loader decodes to pixels and applies a
// forward DCT to luma.
nn::TrainingPair load_pair(const ManifestEntry& e, LoaderKind kind, int patch_blocks, const NormParams& p = {});

}  // namespace freqsr
