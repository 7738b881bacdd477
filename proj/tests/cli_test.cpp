#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "freqsr/dctt.hpp"
#include "freqsr/image_io.hpp"
#include "freqsr/jpeg.hpp"
#include "freqsr/spatial.hpp"
#include "freqsr/synth.hpp"
#include "json.hpp"

namespace freqsr {
namespace {

namespace fs = std::filesystem;

const std::string kCli = FREQSR_CLI;
const fs::path kSource = FREQSR_SOURCE_DIR;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool have_jsonschema() { return std::system("python3 -c 'import jsonschema' >/dev/null 2>&1") == 0; }

int validate(const std::string& schema, const fs::path& doc) {
  const std::string cmd = "python3 " + (kSource / "tests/tools/validate_json.py").string() + " " +
                          (kSource / "docs/schemas" / schema).string() + " " + doc.string();
  return std::system(cmd.c_str());
}

nlohmann::json load_json(const fs::path& p) {
  const auto b = io::read_bytes(p);
  return nlohmann::json::parse(b.begin(), b.end());
}

class Cli : public ::testing::Test {
 protected:
  static inline fs::path dir;
  static void SetUpTestSuite() {
    dir = fs::temp_directory_path() / "freqsr_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir / "hr");
    io::write_image(dir / "hr" / "a.ppm", synth::photo_like(256, 256, 1));
    io::write_image(dir / "hr" / "b.png", synth::photo_like(288, 320, 2));
    io::write_bytes(dir / "c160.jpg", jpeg::encode_baseline(synth::photo_like(160, 160, 3), 95, Subsampling::k420));
  }
  static void TearDownTestSuite() { fs::remove_all(dir); }
  static std::string p(const std::string& name) { return (dir / name).string(); }
};

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("decode"), 1);
  EXPECT_EQ(run("bench-decode --synth 2 --iterations 0"), 1);
  EXPECT_EQ(run("decode " + p("hr/a.ppm") + " --out " + p("x.dctt")), 2);
}

TEST_F(Cli, DecodeDctMatchesLibraryBitExactly) {
  ASSERT_EQ(run("decode " + p("c160.jpg") + " --out " + p("c.dctt")), 0);
  const auto recs = dctt::read(dir / "c.dctt");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].dims, (std::vector<std::uint32_t>{20, 20, 8, 8}));
  EXPECT_EQ(recs[0].dtype, dctt::DType::kI32);
  const DctImage img = jpeg::decode_to_dct(io::read_bytes(dir / "c160.jpg"));
  EXPECT_EQ(dctt::to_plane(recs[0]), img.y);
  EXPECT_EQ(dctt::to_plane(recs[2]), *img.cr);
  const std::vector<dctt::Tensor> expected{dctt::from_plane(img.y), dctt::from_plane(*img.cb),
                                           dctt::from_plane(*img.cr)};
  EXPECT_EQ(io::read_bytes(dir / "c.dctt"), dctt::encode(expected));
}

TEST_F(Cli, DecodeRgbEqualsReconstruction) {
  ASSERT_EQ(run("decode " + p("c160.jpg") + " --mode rgb --out " + p("c.png")), 0);
  EXPECT_EQ(io::read_image(dir / "c.png"), reconstruct_rgb(jpeg::decode_to_dct(io::read_bytes(dir / "c160.jpg"))));
}

TEST_F(Cli, DatasetTrainInferChain) {
  ASSERT_EQ(run("make-dataset --hr " + p("hr") + " --out " + p("ds")), 0);
  const auto manifest = load_json(dir / "ds" / "manifest.json");
  ASSERT_EQ(manifest["pairs"].size(), 2u);
  EXPECT_EQ(manifest["pairs"][0]["lr_width"], 128);
  EXPECT_EQ(manifest["pairs"][1]["hr_width"], 288);
  EXPECT_EQ(manifest["pairs"][1]["hr_height"], 320);

  ASSERT_EQ(run("train --manifest " + p("ds/manifest.json") +
                " --patch-blocks 4 --epochs 2 --feature-width 4 --depthwise-blocks 1 --standard-blocks 1"
                " --threads 2 --seed 3 --weights " + p("w.fsrw") + " --json " + p("train.json")),
            0);
  const auto train = load_json(dir / "train.json");
  EXPECT_EQ(train["epochs"].size(), 2u);
  EXPECT_EQ(train["threads"], 2);

  ASSERT_EQ(run("infer --weights " + p("w.fsrw") + " --input " + p("ds/lr/a.jpg") + " --out " + p("sr.png") +
                " --ref " + p("ds/hr/a.jpg") + " --report " + p("infer.json")),
            0);
  const RgbImage sr = io::read_image(dir / "sr.png");
  EXPECT_EQ(sr.width, 256);
  EXPECT_EQ(sr.height, 256);
  const auto infer = load_json(dir / "infer.json");
  EXPECT_EQ(infer["output_width"], 256);
  EXPECT_TRUE(infer["metrics"]["luma"]["psnr"].is_number());

  ASSERT_EQ(run("upsample --input " + p("ds/lr/a.jpg") + " --out " + p("up.ppm") + " --report " + p("up.json")), 0);
  EXPECT_EQ(io::read_image(dir / "up.ppm").width, 256);
  ASSERT_EQ(run("metrics " + p("up.ppm") + " " + p("up.ppm") + " --json " + p("metrics.json")), 0);
  EXPECT_TRUE(load_json(dir / "metrics.json")["metrics"]["luma"]["psnr"].is_null());

  ASSERT_EQ(run("bench-decode --dir " + p("ds/lr") + " --iterations 1 --warmup 0 --json " + p("bench.json")), 0);
  EXPECT_EQ(load_json(dir / "bench.json")["corpus_size"], 2);

  EXPECT_EQ(run("infer --weights " + p("ds/manifest.json") + " --input " + p("ds/lr/a.jpg")), 2);

  if (!have_jsonschema()) GTEST_SKIP() << "python3 jsonschema not available";
  EXPECT_EQ(validate("manifest.schema.json", dir / "ds" / "manifest.json"), 0);
  EXPECT_EQ(validate("bench_report.schema.json", dir / "train.json"), 0);
  EXPECT_EQ(validate("bench_report.schema.json", dir / "bench.json"), 0);
  EXPECT_EQ(validate("metrics_report.schema.json", dir / "infer.json"), 0);
  EXPECT_EQ(validate("metrics_report.schema.json", dir / "up.json"), 0);
  EXPECT_EQ(validate("metrics_report.schema.json", dir / "metrics.json"), 0);
}

}  // namespace
}  // namespace freqsr
