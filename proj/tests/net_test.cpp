#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "freqsr/net.hpp"
#include "net_oracles.hpp"

namespace freqsr::nn {
namespace {

using testing::brute_conv;
using testing::random_tensor;

TEST(Conv2d, DepthwiseIdentityKernel) {
  std::mt19937_64 rng(1);
  const Tensor4 x = random_tensor(rng, 3, 5, 7);
  Conv c = Conv::dw(3);
  c.weight.col(4).setOnes();
  EXPECT_EQ(conv2d(x, c), x);
}

TEST(Conv2d, OnesKernelOnConstantInput) {
  Tensor4 x(2, 4, 5);
  x.data.setConstant(3.0);
  Conv c = Conv::dw(2);
  c.weight.setOnes();
  const Tensor4 y = conv2d(x, c);
  EXPECT_DOUBLE_EQ(y.at(1, 1, 1), 27.0);
  EXPECT_DOUBLE_EQ(y.at(1, 2, 3), 27.0);
  EXPECT_DOUBLE_EQ(y.at(0, 0, 2), 18.0);
  EXPECT_DOUBLE_EQ(y.at(0, 2, 0), 18.0);
  EXPECT_DOUBLE_EQ(y.at(0, 0, 0), 12.0);
  EXPECT_DOUBLE_EQ(y.at(1, 3, 4), 12.0);
}

TEST(Conv2d, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  const Tensor4 x = random_tensor(rng, 5, 6, 9);
  Conv dense = Conv::dense(5, 4);
  Conv dw = Conv::dw(5);
  testing::randomize(rng, dense);
  testing::randomize(rng, dw);
  EXPECT_LE((conv2d(x, dense).data - brute_conv(x, dense).data).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((conv2d(x, dw).data - brute_conv(x, dw).data).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Conv2d, OneByOneSpatial) {
  std::mt19937_64 rng(3);
  const Tensor4 x = random_tensor(rng, 2, 1, 1);
  Conv c = Conv::dense(2, 3);
  testing::randomize(rng, c);
  EXPECT_LE((conv2d(x, c).data - brute_conv(x, c).data).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Conv2d, ShapeMismatch) {
  EXPECT_THROW(conv2d(Tensor4(3, 4, 4), Conv::dense(2, 2)), ShapeMismatch);
  EXPECT_THROW(conv2d(Tensor4(3, 4, 4), Conv::dw(2)), ShapeMismatch);
  Conv bad = Conv::dense(3, 2);
  bad.bias.resize(5);
  EXPECT_THROW(conv2d(Tensor4(3, 4, 4), bad), ShapeMismatch);
}

TEST(Conv2dGradient, DenseAndDepthwiseMatchFiniteDifferences) {
  std::mt19937_64 rng(4);
  for (bool depthwise : {false, true}) {
    Tensor4 x = random_tensor(rng, 3, 5, 6);
    Conv c = depthwise ? Conv::dw(3) : Conv::dense(3, 4);
    testing::randomize(rng, c);
    const Tensor4 probe = random_tensor(rng, c.out_channels(), 5, 6);
    ConvGrad g;
    const Tensor4 gx = conv2d_backward(x, c, probe, g);
    auto loss = [&] { return testing::dot(probe, conv2d(x, c)); };
    EXPECT_LE(testing::check_gradient(c.weight.data(), g.weight.data(), c.weight.size(), loss), 1e-4) << depthwise;
    EXPECT_LE(testing::check_gradient(c.bias.data(), g.bias.data(), c.bias.size(), loss), 1e-4) << depthwise;
    EXPECT_LE(testing::check_gradient(x.data.data(), gx.data.data(), x.data.size(), loss), 1e-4) << depthwise;
  }
}

TEST(ResidualBlock, ZeroWeightsIsIdentity) {
  std::mt19937_64 rng(5);
  const Tensor4 x = random_tensor(rng, 4, 5, 5);
  EXPECT_EQ(residual_block(x, {Conv::dense(4, 4), Conv::dense(4, 4)}), x);
  EXPECT_EQ(residual_block(x, {Conv::dw(4), Conv::dw(4)}), x);
}

TEST(ResidualBlock, MatchesComposedReference) {
  std::mt19937_64 rng(6);
  const Tensor4 x = random_tensor(rng, 4, 6, 5);
  for (bool depthwise : {false, true}) {
    ResidualBlock b{depthwise ? Conv::dw(4) : Conv::dense(4, 4), depthwise ? Conv::dw(4) : Conv::dense(4, 4)};
    testing::randomize(rng, b.conv1);
    testing::randomize(rng, b.conv2);
    Tensor4 ref = brute_conv(testing::brute_relu(brute_conv(x, b.conv1)), b.conv2);
    ref.data += x.data;
    EXPECT_LE((residual_block(x, b).data - ref.data).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ResidualBlock, DeadReluPathLeavesSkip) {
  std::mt19937_64 rng(7);
  const Tensor4 x = random_tensor(rng, 3, 4, 4);
  ResidualBlock b{Conv::dense(3, 3), Conv::dense(3, 3)};
  b.conv1.bias.setConstant(-1.0);  // first conv output is -1 everywhere
  b.conv2.weight.setOnes();
  EXPECT_EQ(residual_block(x, b), x);
}

FreqSrConfig toy_config() { return {.feature_width = 8, .depthwise_blocks = 1, .standard_blocks = 1}; }

TEST(FreqSrConfig, ParameterCount) {
  const FreqSrConfig def;
  EXPECT_EQ(def.parameter_count(), 374400u);
  EXPECT_EQ(make_model(def).parameter_count(), 374400u);
  for (int f : {1, 8, 32, 96}) {
    const FreqSrConfig c{.feature_width = f};
    EXPECT_EQ(c.parameter_count(), 72u * f * f + 1241u * f + 64u);
    EXPECT_EQ(make_model(c).parameter_count(), c.parameter_count());
  }
  EXPECT_EQ(make_model(toy_config()).parameter_count(), toy_config().parameter_count());
  EXPECT_THROW(make_model({.in_channels = 3}), InvalidArgument);
  EXPECT_THROW(make_model({.depthwise_blocks = -1}), InvalidArgument);
}

TEST(Forward, PreservesShape) {
  const FreqSrModel m = init_model({.feature_width = 16}, 1);
  const Tensor4 y = forward(m, Tensor4(64, 64, 64));
  EXPECT_EQ(y.channels(), 64);
  EXPECT_EQ(y.height, 64);
  EXPECT_EQ(y.width, 64);
  EXPECT_THROW(forward(m, Tensor4(3, 8, 8)), ShapeMismatch);
}

TEST(Forward, DefaultWidthOnPatchShape) {
  const FreqSrModel m = init_model({}, 2);
  std::mt19937_64 rng(2);
  const Tensor4 y = forward(m, random_tensor(rng, 64, 64, 64, -0.1, 0.1));
  EXPECT_EQ(y.channels(), 64);
  EXPECT_EQ(y.height, 64);
  EXPECT_EQ(y.width, 64);
  EXPECT_TRUE(y.data.allFinite());
}

TEST(Forward, ZeroTailGivesBiases) {
  FreqSrModel m = init_model(toy_config(), 3);
  m.tail.weight.setZero();
  std::mt19937_64 rng(3);
  const Tensor4 y = forward(m, random_tensor(rng, 64, 5, 4));
  for (int c = 0; c < 64; ++c) {
    for (int p = 0; p < y.pixels(); ++p) ASSERT_EQ(y.data(c, p), m.tail.bias(c));
  }
}

TEST(Forward, TraceOutputMatchesForward) {
  const FreqSrModel m = init_model(toy_config(), 4);
  std::mt19937_64 rng(4);
  const Tensor4 x = random_tensor(rng, 64, 6, 6);
  EXPECT_EQ(forward_train(m, x).output, forward(m, x));
}

TEST(Backward, ToyModelMatchesFiniteDifferences) {
  FreqSrModel m = init_model(toy_config(), 5);
  std::mt19937_64 rng(5);
  Tensor4 x = random_tensor(rng, 64, 6, 6);
  const Tensor4 probe = random_tensor(rng, 64, 6, 6);
  const auto r = testing::check_model_gradients(m, x, probe);
  EXPECT_EQ(r.parameters_checked, toy_config().parameter_count());
  EXPECT_LE(r.worst_parameter, 1e-4);
  EXPECT_LE(r.worst_input, 1e-4);
}

TEST(DepthwiseStage, ChannelsStayIndependent) {
  FreqSrModel m = init_model({.feature_width = 6, .depthwise_blocks = 4, .standard_blocks = 0}, 6);
  std::mt19937_64 rng(6);
  const Tensor4 h = random_tensor(rng, 6, 7, 7);
  auto stage = [&](Tensor4 t) {
    for (const auto& b : m.depthwise) t = residual_block(t, b);
    return t;
  };
  const Tensor4 base = stage(h);
  for (int i = 0; i < 6; ++i) {
    Tensor4 bumped = h;
    bumped.data.row(i).array() += 0.25;
    const Tensor4 out = stage(bumped);
    for (int c = 0; c < 6; ++c) {
      const bool changed = (out.data.row(c) - base.data.row(c)).cwiseAbs().maxCoeff() > 0;
      if (c != i) EXPECT_FALSE(changed) << "channel " << c << " moved when " << i << " was perturbed";
    }
    EXPECT_NE(out.data.row(i), base.data.row(i));
  }
}

TEST(L1Loss, Examples) {
  std::mt19937_64 rng(7);
  const Tensor4 a = random_tensor(rng, 2, 3, 4);
  const LossResult same = l1_loss(a, a);
  EXPECT_EQ(same.loss, 0.0);
  EXPECT_EQ(same.grad.data.cwiseAbs().maxCoeff(), 0.0);

  Tensor4 b = a;
  b.data.array() -= 2.0;
  const LossResult shifted = l1_loss(a, b);
  EXPECT_NEAR(shifted.loss, 2.0, 1e-12);
  EXPECT_LE((shifted.grad.data.array() - 1.0 / 24).abs().maxCoeff(), 1e-15);

  const Tensor4 c = random_tensor(rng, 2, 3, 4);
  double brute = 0;
  for (int ch = 0; ch < 2; ++ch) {
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 4; ++x) brute += std::abs(a.at(ch, y, x) - c.at(ch, y, x));
    }
  }
  EXPECT_NEAR(l1_loss(a, c).loss, brute / 24, 1e-12);
  EXPECT_THROW(l1_loss(a, Tensor4(2, 3, 5)), ShapeMismatch);
}

FreqSrModel scalar_like_model() {
  FreqSrModel m = make_model({.feature_width = 1, .depthwise_blocks = 0, .standard_blocks = 0});
  m.head.weight(0, 0) = 0.5;
  return m;
}

std::vector<ConvGrad> grads_for(const FreqSrModel& m, double g_head_w0) {
  std::vector<ConvGrad> g;
  for (const Conv* c : m.convs()) {
    g.push_back({Eigen::MatrixXd::Zero(c->weight.rows(), c->weight.cols()), Eigen::VectorXd::Zero(c->bias.size())});
  }
  g[0].weight(0, 0) = g_head_w0;
  return g;
}

TEST(Adam, ZeroGradientLeavesWeights) {
  FreqSrModel m = init_model(toy_config(), 8);
  const FreqSrModel before = m;
  std::vector<ConvGrad> zero;
  for (const Conv* c : m.convs()) {
    zero.push_back({Eigen::MatrixXd::Zero(c->weight.rows(), c->weight.cols()), Eigen::VectorXd::Zero(c->bias.size())});
  }
  adam_step(m, zero, {.lr = 1e-2});
  EXPECT_EQ(m.adam.step, 1);
  for (std::size_t i = 0; i < m.convs().size(); ++i) EXPECT_EQ(*m.convs()[i], *before.convs()[i]);
}

TEST(Adam, FirstStepHandComputed) {
  // m = 0.1 g, v = 0.001 g^2; bias-corrected m_hat = g, v_hat = g^2, so the
  // update is lr * g / (|g| + eps).
  FreqSrModel m = scalar_like_model();
  const double g = 0.3, lr = 0.01;
  adam_step(m, grads_for(m, g), {.lr = lr});
  const double m1 = 0.1 * g, v1 = 0.001 * g * g;
  const double expected = 0.5 - lr * (m1 / 0.1) / (std::sqrt(v1 / 0.001) + 1e-8);
  EXPECT_NEAR(m.head.weight(0, 0), expected, 1e-15);
  EXPECT_NEAR(m.head.weight(0, 0), 0.5 - lr * g / (g + 1e-8), 1e-15);
}

TEST(Adam, TwoStepsFollowRecurrence) {
  FreqSrModel m = scalar_like_model();
  const double g = -0.7, lr = 0.05, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double w = 0.5, mm = 0, vv = 0;
  for (int t = 1; t <= 2; ++t) {
    adam_step(m, grads_for(m, g), {.lr = lr});
    mm = b1 * mm + (1 - b1) * g;
    vv = b2 * vv + (1 - b2) * g * g;
    w -= lr * (mm / (1 - std::pow(b1, t))) / (std::sqrt(vv / (1 - std::pow(b2, t))) + eps);
  }
  EXPECT_EQ(m.adam.step, 2);
  EXPECT_NEAR(m.head.weight(0, 0), w, 1e-14);
}

std::vector<TrainingPair> toy_dataset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TrainingPair> pairs;
  for (int i = 0; i < 8; ++i) {
    Tensor4 in = random_tensor(rng, 64, 6, 6, -0.2, 0.2);
    Tensor4 target = in;
    target.data = 0.5 * in.data + 0.05 * random_tensor(rng, 64, 6, 6).data;
    pairs.push_back({std::move(in), std::move(target)});
  }
  return pairs;
}

double mean_loss(const FreqSrModel& m, const std::vector<TrainingPair>& pairs) {
  double s = 0;
  for (const auto& p : pairs) s += l1_loss(forward(m, p.input), p.target).loss;
  return s / static_cast<double>(pairs.size());
}

TEST(Train, ToyOverfitHalvesLossAndIsDeterministic) {
  const auto data = toy_dataset(9);
  const double initial = mean_loss(init_model(toy_config(), 42), data);
  const TrainResult a = train(data, toy_config(), 25, 1e-3, 42);  // 200 iterations
  ASSERT_EQ(a.epoch_loss.size(), 25u);
  EXPECT_LE(mean_loss(a.model, data), 0.5 * initial);
  EXPECT_LE(a.epoch_loss.back(), 0.5 * initial);
  const TrainResult b = train(data, toy_config(), 25, 1e-3, 42);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
  EXPECT_TRUE(a.model == b.model);
}

TEST(Train, ZeroEpochsReturnsInitialisation) {
  const auto data = toy_dataset(10);
  const TrainResult r = train(data, toy_config(), 0, 1e-3, 7);
  EXPECT_TRUE(r.epoch_loss.empty());
  EXPECT_TRUE(r.model == init_model(toy_config(), 7));
}

TEST(Train, Errors) {
  EXPECT_THROW(train({}, toy_config(), 1, 1e-3, 1), EmptyDataset);
  auto data = toy_dataset(11);
  data[3].target = Tensor4(64, 5, 6);
  EXPECT_THROW(train(data, toy_config(), 1, 1e-3, 1), ShapeMismatch);
}

TEST(TensorConversion, ChannelIsFrequencyIndex) {
  FreqTensor t(2, 3, 0, 0);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < 64; ++k) t.at(r, c, k) = r * 1000 + c * 100 + k;
    }
  }
  const Tensor4 x = to_tensor(t);
  EXPECT_EQ(x.channels(), 64);
  EXPECT_EQ(x.height, 2);
  EXPECT_EQ(x.width, 3);
  EXPECT_EQ(x.at(10, 1, 2), 1210);
  t.fit_value_range();
  EXPECT_EQ(to_freq_tensor(x), t);
}

class WeightsFile : public ::testing::Test {
 protected:
  std::filesystem::path path = std::filesystem::temp_directory_path() / "freqsr_net_test.fsrw";
  void TearDown() override { std::filesystem::remove(path); }
};

TEST_F(WeightsFile, RoundTripIsBitExact) {
  const TrainResult r = train(toy_dataset(12), toy_config(), 1, 1e-3, 3);
  save_weights(r.model, path);
  EXPECT_TRUE(load_weights(path) == r.model);
  const FreqSrModel fresh = init_model({.feature_width = 4}, 5);
  EXPECT_TRUE(deserialize_weights(serialize_weights(fresh)) == fresh);
}

TEST_F(WeightsFile, RejectsBadMagicAndTruncation) {
  auto bytes = serialize_weights(init_model(toy_config(), 1));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(deserialize_weights(bad), FormatError);
  for (std::size_t keep : {std::size_t{0}, std::size_t{3}, std::size_t{9}, bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW(deserialize_weights(std::span(bytes).first(keep)), FormatError) << keep;
  }
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(deserialize_weights(extra), FormatError);
  EXPECT_THROW(load_weights(path.string() + ".missing"), FormatError);
}

}  // namespace
}  // namespace freqsr::nn
