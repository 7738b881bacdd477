#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "freqsr/dct_model.hpp"

namespace freqsr::nn {

// Batch-1 activation tensor. Stored as a channels x (height*width) matrix,
// each row one channel in row-major pixel order.
template <typename Scalar>
struct BasicTensor4 {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  int height = 0;
  int width = 0;
  Matrix data;

  BasicTensor4() = default;
  BasicTensor4(int channels, int h, int w) : height(h), width(w), data(Matrix::Zero(channels, h * w)) {}

  int channels() const { return static_cast<int>(data.rows()); }
  int pixels() const { return height * width; }
  Scalar& at(int c, int y, int x) { return data(c, y * width + x); }
  Scalar at(int c, int y, int x) const { return data(c, y * width + x); }
  bool same_shape(const BasicTensor4& o) const {
    return channels() == o.channels() && height == o.height && width == o.width;
  }

  friend bool operator==(const BasicTensor4& a, const BasicTensor4& b) {
    return a.same_shape(b) && a.data == b.data;
  }
};

using Tensor4 = BasicTensor4<double>;

// 3x3, stride 1, zero padding 1. Dense weights are out x (in*9) with column
// index (i*3 + ky)*3 + kx; depthwise weights are channels x 9.
struct Conv {
  bool depthwise = false;
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;

  static Conv dense(int in, int out);
  static Conv dw(int channels);

  int in_channels() const { return depthwise ? static_cast<int>(weight.rows()) : static_cast<int>(weight.cols() / 9); }
  int out_channels() const { return static_cast<int>(weight.rows()); }
  std::size_t parameter_count() const { return static_cast<std::size_t>(weight.size() + bias.size()); }

  friend bool operator==(const Conv&, const Conv&) = default;
};

struct ConvGrad {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

Tensor4 conv2d(const Tensor4& x, const Conv& conv);
// Given dL/dy, returns dL/dx and accumulates parameter gradients into g
// (which is resized and zeroed when empty).
Tensor4 conv2d_backward(const Tensor4& x, const Conv& conv, const Tensor4& grad_out, ConvGrad& g);

struct ResidualBlock {
  Conv conv1;
  Conv conv2;
  friend bool operator==(const ResidualBlock&, const ResidualBlock&) = default;
};

// y = x + conv2(relu(conv1(x)))
Tensor4 residual_block(const Tensor4& x, const ResidualBlock& block);

struct FreqSrConfig {
  int in_channels = 64;
  int feature_width = 64;
  int depthwise_blocks = 4;
  int standard_blocks = 4;
  int out_channels = 64;

  void validate() const;
  // 72F^2 + 1241F + 64 for the default block counts.
  std::size_t parameter_count() const;
  friend bool operator==(const FreqSrConfig&, const FreqSrConfig&) = default;
};

struct AdamState {
  std::vector<ConvGrad> m;
  std::vector<ConvGrad> v;
  std::int64_t step = 0;
};

struct FreqSrModel {
  FreqSrConfig config;
  Conv head;
  std::vector<ResidualBlock> depthwise;
  std::vector<ResidualBlock> standard;
  Conv tail;
  AdamState adam;

  // Convs in a fixed order: head, depthwise blocks, standard blocks, tail.
  std::vector<Conv*> convs();
  std::vector<const Conv*> convs() const;
  std::vector<std::string> conv_names() const;
  std::size_t parameter_count() const;
};

bool operator==(const FreqSrModel& a, const FreqSrModel& b);

// All-zero weights and biases of the right shapes.
FreqSrModel make_model(const FreqSrConfig& cfg);
// Kaiming-uniform weights, biases uniform in +-1/sqrt(fan_in).
FreqSrModel init_model(const FreqSrConfig& cfg, std::uint64_t seed);

Tensor4 forward(const FreqSrModel& model, const Tensor4& x);

// Intermediate activations kept for backpropagation.
struct ForwardTrace {
  struct Block {
    Tensor4 input;
    Tensor4 pre_activation;
    Tensor4 hidden;
  };
  Tensor4 input;
  std::vector<Block> blocks;
  Tensor4 tail_input;
  Tensor4 output;
};

ForwardTrace forward_train(const FreqSrModel& model, const Tensor4& x);
// Gradients in convs() order. Optionally returns dL/dx.
std::vector<ConvGrad> backward(const FreqSrModel& model, const ForwardTrace& trace, const Tensor4& grad_out,
                               Tensor4* grad_input = nullptr);

struct LossResult {
  double loss = 0;
  Tensor4 grad;
};

// Mean absolute error with subgradient sign(pred - target) / N, sign(0) = 0.
LossResult l1_loss(const Tensor4& pred, const Tensor4& target);

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

void adam_step(FreqSrModel& model, const std::vector<ConvGrad>& grads, const AdamOptions& opt);

// One forward/backward/update on a single pair; returns the pre-update loss.
double train_step(FreqSrModel& model, const Tensor4& input, const Tensor4& target, const AdamOptions& opt);

struct TrainingPair {
  Tensor4 input;
  Tensor4 target;
};

struct TrainResult {
  FreqSrModel model;
  std::vector<double> epoch_loss;
};

// Batch size 1; pair order reshuffled every epoch from the seed.
TrainResult train(const std::vector<TrainingPair>& dataset, const FreqSrConfig& cfg, int epochs, double lr,
                  std::uint64_t seed);

Tensor4 to_tensor(const FreqTensor& t);
FreqTensor to_freq_tensor(const Tensor4& t);

void save_weights(const FreqSrModel& model, const std::filesystem::path& path);
FreqSrModel load_weights(const std::filesystem::path& path);
std::vector<std::uint8_t> serialize_weights(const FreqSrModel& model);
FreqSrModel deserialize_weights(std::span<const std::uint8_t> bytes);

}  // namespace freqsr::nn
