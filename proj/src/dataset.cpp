#include "freqsr/dataset.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "freqsr/image_io.hpp"
#include "freqsr/jpeg.hpp"
#include "freqsr/spatial.hpp"
#include "freqsr/synth.hpp"

namespace freqsr {

namespace fs = std::filesystem;

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FormatError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".ppm" || ext == ".png" || ext == ".jpg" || ext == ".jpeg") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Manifest make_dataset(const std::vector<fs::path>& sources, const fs::path& out_dir, const DatasetOptions& opt) {
  if (opt.scale < 2 || opt.scale > 8) throw InvalidArgument("scale must be in [2, 8]");
  if (opt.quality < 1 || opt.quality > 100) throw InvalidArgument("quality must be in [1, 100]");
  if (sources.empty()) throw EmptyDataset("no source images");
  fs::create_directories(out_dir / "hr");
  fs::create_directories(out_dir / "lr");
  Manifest m{opt.scale, opt.quality, {}};
  std::set<std::string> names;
  const int multiple = 16 * opt.scale;
  for (const fs::path& src : sources) {
    const std::string name = src.stem().string();
    if (!names.insert(name).second) throw InvalidArgument("duplicate image name " + name);
    const RgbImage img = io::read_image(src);
    const int w = img.width / multiple * multiple;
    const int h = img.height / multiple * multiple;
    if (w == 0 || h == 0) {
      throw TooSmall(src.string() + " is smaller than " + std::to_string(multiple) + " pixels on a side");
    }
    const RgbImage hr = (w == img.width && h == img.height) ? img : synth::crop(img, 0, 0, w, h);
    const RgbImage lr = synth::box_downsample(hr, opt.scale);
    ManifestEntry e{name,
                    out_dir / "hr" / (name + ".jpg"),
                    out_dir / "lr" / (name + ".jpg"),
                    img.width,
                    img.height,
                    w,
                    h,
                    lr.width,
                    lr.height,
                    w != img.width || h != img.height};
    io::write_bytes(e.hr, jpeg::encode_baseline(hr, opt.quality, Subsampling::k420));
    io::write_bytes(e.lr, jpeg::encode_baseline(lr, opt.quality, Subsampling::k420));
    m.entries.push_back(std::move(e));
  }
  write_manifest(m, out_dir / "manifest.json");
  return m;
}

void write_manifest(const Manifest& m, const fs::path& path) {
  const fs::path base = path.parent_path().empty() ? fs::current_path() : fs::absolute(path.parent_path());
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& e : m.entries) {
    pairs.push_back({{"name", e.name},
                     {"hr", fs::absolute(e.hr).lexically_relative(base).generic_string()},
                     {"lr", fs::absolute(e.lr).lexically_relative(base).generic_string()},
                     {"source_width", e.source_width},
                     {"source_height", e.source_height},
                     {"hr_width", e.hr_width},
                     {"hr_height", e.hr_height},
                     {"lr_width", e.lr_width},
                     {"lr_height", e.lr_height},
                     {"trimmed", e.trimmed}});
  }
  const nlohmann::json j{{"schema_version", 1}, {"scale", m.scale}, {"quality", m.quality}, {"pairs", pairs}};
  const std::string text = j.dump(2) + "\n";
  io::write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Manifest read_manifest(const fs::path& path) {
  const auto bytes = io::read_bytes(path);
  const fs::path base = fs::absolute(path).parent_path();
  try {
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    Manifest m{j.at("scale").get<int>(), j.at("quality").get<int>(), {}};
    for (const auto& p : j.at("pairs")) {
      m.entries.push_back({p.at("name").get<std::string>(), base / p.at("hr").get<std::string>(),
                           base / p.at("lr").get<std::string>(), p.at("source_width").get<int>(),
                           p.at("source_height").get<int>(), p.at("hr_width").get<int>(),
                           p.at("hr_height").get<int>(), p.at("lr_width").get<int>(), p.at("lr_height").get<int>(),
                           p.at("trimmed").get<bool>()});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest " + path.string() + ": " + e.what());
  }
}

LoaderKind parse_loader(const std::string& name) {
  if (name == "dct") return LoaderKind::kDct;
  if (name == "rgb") return LoaderKind::kRgb;
  throw InvalidArgument("loader must be dct or rgb, got " + name);
}

const char* loader_name(LoaderKind kind) { return kind == LoaderKind::kDct ? "dct" : "rgb"; }

FreqTensor hr_target(const DctPlane& hr_y, BlockOrigin lr_origin, int patch_blocks, const NormParams& p) {
  const DctPlane crop = crop_blocks(hr_y, {2 * lr_origin.row, 2 * lr_origin.col}, 2 * patch_blocks);
  return blockify(normalize(crop, p));
}

DctPlane luma_dct_from_rgb(const RgbImage& img) {
  const Plane y = pad_to_multiple(luma(img), 8).array() - 128.0;
  return fdct_plane(y);
}

nn::TrainingPair load_pair(const ManifestEntry& e, LoaderKind kind, int patch_blocks, const NormParams& p) {
  const auto lr_bytes = io::read_bytes(e.lr);
  const auto hr_bytes = io::read_bytes(e.hr);
  const CropSpec spec{patch_blocks};
  DctPlane lr_y, hr_y;
  if (kind == LoaderKind::kDct) {
    DctImage lr = jpeg::decode_to_dct(lr_bytes);
    if (!lr.has_chroma()) throw MissingChroma(e.lr.string() + " is not a colour JPEG");
    lr_y = std::move(lr.y);
    hr_y = std::move(jpeg::decode_to_dct(hr_bytes).y);
  } else {
    lr_y = luma_dct_from_rgb(jpeg::decode_to_rgb(lr_bytes));
    hr_y = luma_dct_from_rgb(jpeg::decode_to_rgb(hr_bytes));
  }
  const BlockOrigin origin = center_crop_origin(lr_y.block_rows(), lr_y.block_cols(), patch_blocks);
  const FreqTensor input = preprocess_y(lr_y, &spec, p);
  return {nn::to_tensor(input), nn::to_tensor(hr_target(hr_y, origin, patch_blocks, p))};
}

}  // namespace freqsr
