#include "freqsr/net.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "binio.hpp"

namespace freqsr::nn {

Conv Conv::dense(int in, int out) {
  return {false, Eigen::MatrixXd::Zero(out, in * 9), Eigen::VectorXd::Zero(out)};
}

Conv Conv::dw(int channels) { return {true, Eigen::MatrixXd::Zero(channels, 9), Eigen::VectorXd::Zero(channels)}; }

namespace {

void check_conv(const Tensor4& x, const Conv& conv) {
  if (conv.bias.size() != conv.weight.rows()) throw ShapeMismatch("conv bias length != output channels");
  if (conv.depthwise) {
    if (conv.weight.cols() != 9) throw ShapeMismatch("depthwise kernel must be 3x3 per channel");
  } else if (conv.weight.cols() % 9 != 0) {
    throw ShapeMismatch("dense kernel must be 3x3");
  }
  if (x.channels() != conv.in_channels()) {
    throw ShapeMismatch("conv expects " + std::to_string(conv.in_channels()) + " input channels, got " +
                        std::to_string(x.channels()));
  }
  if (x.height < 1 || x.width < 1) throw ShapeMismatch("empty spatial extent");
}

// Output rows/cols [lo, hi) that read an in-bounds input at offset d.
struct Span {
  int lo, hi;
};
Span valid_range(int n, int d) { return {std::max(0, -d), std::min(n, n - d)}; }

// Rows of the (in*9) x HW patch matrix.
Eigen::MatrixXd im2col(const Tensor4& x) {
  const int h = x.height, w = x.width;
  Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(x.channels() * 9, x.pixels());
  for (int i = 0; i < x.channels(); ++i) {
    for (int ky = 0; ky < 3; ++ky) {
      const Span ys = valid_range(h, ky - 1);
      for (int kx = 0; kx < 3; ++kx) {
        const Span xs = valid_range(w, kx - 1);
        const int row = (i * 3 + ky) * 3 + kx;
        for (int y = ys.lo; y < ys.hi; ++y) {
          for (int xx = xs.lo; xx < xs.hi; ++xx) cols(row, y * w + xx) = x.at(i, y + ky - 1, xx + kx - 1);
        }
      }
    }
  }
  return cols;
}

void col2im_add(const Eigen::MatrixXd& cols, Tensor4& dx) {
  const int h = dx.height, w = dx.width;
  for (int i = 0; i < dx.channels(); ++i) {
    for (int ky = 0; ky < 3; ++ky) {
      const Span ys = valid_range(h, ky - 1);
      for (int kx = 0; kx < 3; ++kx) {
        const Span xs = valid_range(w, kx - 1);
        const int row = (i * 3 + ky) * 3 + kx;
        for (int y = ys.lo; y < ys.hi; ++y) {
          for (int xx = xs.lo; xx < xs.hi; ++xx) dx.at(i, y + ky - 1, xx + kx - 1) += cols(row, y * w + xx);
        }
      }
    }
  }
}

void ensure_grad(ConvGrad& g, const Conv& conv) {
  if (g.weight.size() == 0) {
    g.weight = Eigen::MatrixXd::Zero(conv.weight.rows(), conv.weight.cols());
    g.bias = Eigen::VectorXd::Zero(conv.bias.size());
  }
}

Tensor4 relu(const Tensor4& x) {
  Tensor4 y = x;
  y.data = y.data.cwiseMax(0.0);
  return y;
}

}  // namespace

Tensor4 conv2d(const Tensor4& x, const Conv& conv) {
  check_conv(x, conv);
  const int h = x.height, w = x.width;
  Tensor4 y(conv.out_channels(), h, w);
  if (!conv.depthwise) {
    y.data.noalias() = conv.weight * im2col(x);
    y.data.colwise() += conv.bias;
    return y;
  }
  for (int c = 0; c < x.channels(); ++c) {
    y.data.row(c).setConstant(conv.bias(c));
    for (int ky = 0; ky < 3; ++ky) {
      const Span ys = valid_range(h, ky - 1);
      for (int kx = 0; kx < 3; ++kx) {
        const Span xs = valid_range(w, kx - 1);
        const double k = conv.weight(c, ky * 3 + kx);
        for (int yy = ys.lo; yy < ys.hi; ++yy) {
          for (int xx = xs.lo; xx < xs.hi; ++xx) y.at(c, yy, xx) += k * x.at(c, yy + ky - 1, xx + kx - 1);
        }
      }
    }
  }
  return y;
}

Tensor4 conv2d_backward(const Tensor4& x, const Conv& conv, const Tensor4& grad_out, ConvGrad& g) {
  check_conv(x, conv);
  if (grad_out.channels() != conv.out_channels() || grad_out.height != x.height || grad_out.width != x.width) {
    throw ShapeMismatch("conv output gradient has the wrong shape");
  }
  ensure_grad(g, conv);
  const int h = x.height, w = x.width;
  Tensor4 dx(x.channels(), h, w);
  g.bias += grad_out.data.rowwise().sum();
  if (!conv.depthwise) {
    const Eigen::MatrixXd cols = im2col(x);
    g.weight.noalias() += grad_out.data * cols.transpose();
    const Eigen::MatrixXd dcols = conv.weight.transpose() * grad_out.data;
    col2im_add(dcols, dx);
    return dx;
  }
  for (int c = 0; c < x.channels(); ++c) {
    for (int ky = 0; ky < 3; ++ky) {
      const Span ys = valid_range(h, ky - 1);
      for (int kx = 0; kx < 3; ++kx) {
        const Span xs = valid_range(w, kx - 1);
        const double k = conv.weight(c, ky * 3 + kx);
        double acc = 0;
        for (int yy = ys.lo; yy < ys.hi; ++yy) {
          for (int xx = xs.lo; xx < xs.hi; ++xx) {
            const double go = grad_out.at(c, yy, xx);
            acc += go * x.at(c, yy + ky - 1, xx + kx - 1);
            dx.at(c, yy + ky - 1, xx + kx - 1) += k * go;
          }
        }
        g.weight(c, ky * 3 + kx) += acc;
      }
    }
  }
  return dx;
}

Tensor4 residual_block(const Tensor4& x, const ResidualBlock& block) {
  Tensor4 y = conv2d(relu(conv2d(x, block.conv1)), block.conv2);
  if (!y.same_shape(x)) throw ShapeMismatch("residual branch changes the tensor shape");
  y.data += x.data;
  return y;
}

void FreqSrConfig::validate() const {
  if (in_channels != 64 || out_channels != 64) throw InvalidArgument("FreqSR needs 64 input and output channels");
  if (feature_width < 1) throw InvalidArgument("feature width must be >= 1");
  if (depthwise_blocks < 0 || standard_blocks < 0) throw InvalidArgument("block counts must be >= 0");
}

std::size_t FreqSrConfig::parameter_count() const {
  const std::size_t f = feature_width;
  const std::size_t head = in_channels * 9 * f + f;
  const std::size_t dw_block = 2 * (9 * f + f);
  const std::size_t std_block = 2 * (9 * f * f + f);
  const std::size_t tail = f * 9 * out_channels + out_channels;
  return head + depthwise_blocks * dw_block + standard_blocks * std_block + tail;
}

std::vector<Conv*> FreqSrModel::convs() {
  std::vector<Conv*> out{&head};
  for (auto* blocks : {&depthwise, &standard}) {
    for (auto& b : *blocks) {
      out.push_back(&b.conv1);
      out.push_back(&b.conv2);
    }
  }
  out.push_back(&tail);
  return out;
}

std::vector<const Conv*> FreqSrModel::convs() const {
  auto mut = const_cast<FreqSrModel*>(this)->convs();
  return {mut.begin(), mut.end()};
}

std::vector<std::string> FreqSrModel::conv_names() const {
  std::vector<std::string> names{"head"};
  for (std::size_t i = 0; i < depthwise.size(); ++i) {
    names.push_back("dw" + std::to_string(i) + ".conv1");
    names.push_back("dw" + std::to_string(i) + ".conv2");
  }
  for (std::size_t i = 0; i < standard.size(); ++i) {
    names.push_back("std" + std::to_string(i) + ".conv1");
    names.push_back("std" + std::to_string(i) + ".conv2");
  }
  names.push_back("tail");
  return names;
}

std::size_t FreqSrModel::parameter_count() const {
  std::size_t n = 0;
  for (const Conv* c : convs()) n += c->parameter_count();
  return n;
}

namespace {

bool grads_equal(const std::vector<ConvGrad>& a, const std::vector<ConvGrad>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].weight.rows() != b[i].weight.rows() || a[i].weight.cols() != b[i].weight.cols() ||
        a[i].bias.size() != b[i].bias.size() || a[i].weight != b[i].weight || a[i].bias != b[i].bias) {
      return false;
    }
  }
  return true;
}

bool conv_equal(const Conv& a, const Conv& b) {
  return a.depthwise == b.depthwise && a.weight.rows() == b.weight.rows() && a.weight.cols() == b.weight.cols() &&
         a.bias.size() == b.bias.size() && a.weight == b.weight && a.bias == b.bias;
}

}  // namespace

bool operator==(const FreqSrModel& a, const FreqSrModel& b) {
  if (!(a.config == b.config) || a.adam.step != b.adam.step) return false;
  const auto ca = a.convs(), cb = b.convs();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!conv_equal(*ca[i], *cb[i])) return false;
  }
  return grads_equal(a.adam.m, b.adam.m) && grads_equal(a.adam.v, b.adam.v);
}

FreqSrModel make_model(const FreqSrConfig& cfg) {
  cfg.validate();
  FreqSrModel m;
  m.config = cfg;
  const int f = cfg.feature_width;
  m.head = Conv::dense(cfg.in_channels, f);
  m.depthwise.assign(cfg.depthwise_blocks, ResidualBlock{Conv::dw(f), Conv::dw(f)});
  m.standard.assign(cfg.standard_blocks, ResidualBlock{Conv::dense(f, f), Conv::dense(f, f)});
  m.tail = Conv::dense(f, cfg.out_channels);
  return m;
}

FreqSrModel init_model(const FreqSrConfig& cfg, std::uint64_t seed) {
  FreqSrModel m = make_model(cfg);
  std::mt19937_64 rng(seed);
  for (Conv* c : m.convs()) {
    const double fan_in = c->depthwise ? 9.0 : static_cast<double>(c->weight.cols());
    std::uniform_real_distribution<double> w(-std::sqrt(6.0 / fan_in), std::sqrt(6.0 / fan_in));
    std::uniform_real_distribution<double> b(-1.0 / std::sqrt(fan_in), 1.0 / std::sqrt(fan_in));
    for (Eigen::Index i = 0; i < c->weight.size(); ++i) c->weight.data()[i] = w(rng);
    for (Eigen::Index i = 0; i < c->bias.size(); ++i) c->bias(i) = b(rng);
  }
  return m;
}

namespace {

void check_input(const FreqSrModel& model, const Tensor4& x) {
  if (x.channels() != model.config.in_channels) {
    throw ShapeMismatch("network input must have " + std::to_string(model.config.in_channels) + " channels");
  }
}

}  // namespace

Tensor4 forward(const FreqSrModel& model, const Tensor4& x) {
  check_input(model, x);
  Tensor4 h = conv2d(x, model.head);
  for (const auto& b : model.depthwise) h = residual_block(h, b);
  for (const auto& b : model.standard) h = residual_block(h, b);
  return conv2d(h, model.tail);
}

ForwardTrace forward_train(const FreqSrModel& model, const Tensor4& x) {
  check_input(model, x);
  ForwardTrace t;
  t.input = x;
  Tensor4 h = conv2d(x, model.head);
  for (const auto* blocks : {&model.depthwise, &model.standard}) {
    for (const auto& b : *blocks) {
      ForwardTrace::Block rec;
      rec.pre_activation = conv2d(h, b.conv1);
      rec.hidden = relu(rec.pre_activation);
      Tensor4 next = conv2d(rec.hidden, b.conv2);
      next.data += h.data;
      rec.input = std::move(h);
      h = std::move(next);
      t.blocks.push_back(std::move(rec));
    }
  }
  t.output = conv2d(h, model.tail);
  t.tail_input = std::move(h);
  return t;
}

std::vector<ConvGrad> backward(const FreqSrModel& model, const ForwardTrace& trace, const Tensor4& grad_out,
                               Tensor4* grad_input) {
  const auto convs = model.convs();
  std::vector<ConvGrad> grads(convs.size());
  Tensor4 g = conv2d_backward(trace.tail_input, model.tail, grad_out, grads.back());
  for (std::size_t i = trace.blocks.size(); i-- > 0;) {
    const auto& rec = trace.blocks[i];
    const Conv& c1 = *convs[1 + 2 * i];
    const Conv& c2 = *convs[2 + 2 * i];
    Tensor4 gh = conv2d_backward(rec.hidden, c2, g, grads[2 + 2 * i]);
    gh.data = (rec.pre_activation.data.array() > 0.0).select(gh.data, 0.0);
    g.data += conv2d_backward(rec.input, c1, gh, grads[1 + 2 * i]).data;
  }
  Tensor4 gx = conv2d_backward(trace.input, model.head, g, grads.front());
  if (grad_input) *grad_input = std::move(gx);
  return grads;
}

LossResult l1_loss(const Tensor4& pred, const Tensor4& target) {
  if (!pred.same_shape(target)) throw ShapeMismatch("l1_loss operands differ in shape");
  const auto n = static_cast<double>(pred.data.size());
  if (n == 0) throw ShapeMismatch("l1_loss on empty tensors");
  LossResult r;
  const auto diff = (pred.data - target.data).array();
  r.loss = diff.abs().sum() / n;
  r.grad = Tensor4(pred.channels(), pred.height, pred.width);
  r.grad.data = diff.sign().matrix() / n;
  return r;
}

void adam_step(FreqSrModel& model, const std::vector<ConvGrad>& grads, const AdamOptions& opt) {
  auto convs = model.convs();
  if (grads.size() != convs.size()) throw ShapeMismatch("gradient list does not match the model");
  auto& st = model.adam;
  if (st.m.size() != convs.size()) {
    st.m.assign(convs.size(), {});
    st.v.assign(convs.size(), {});
    for (std::size_t i = 0; i < convs.size(); ++i) {
      ensure_grad(st.m[i], *convs[i]);
      ensure_grad(st.v[i], *convs[i]);
    }
  }
  ++st.step;
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(st.step));
  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    if (g.size() != param.size()) throw ShapeMismatch("gradient shape does not match parameter");
    m = opt.beta1 * m + (1.0 - opt.beta1) * g;
    v = opt.beta2 * v + (1.0 - opt.beta2) * g.cwiseAbs2();
    param.array() -= opt.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + opt.eps);
  };
  for (std::size_t i = 0; i < convs.size(); ++i) {
    update(convs[i]->weight, grads[i].weight, st.m[i].weight, st.v[i].weight);
    update(convs[i]->bias, grads[i].bias, st.m[i].bias, st.v[i].bias);
  }
}

double train_step(FreqSrModel& model, const Tensor4& input, const Tensor4& target, const AdamOptions& opt) {
  const ForwardTrace trace = forward_train(model, input);
  const LossResult loss = l1_loss(trace.output, target);
  adam_step(model, backward(model, trace, loss.grad), opt);
  return loss.loss;
}

TrainResult train(const std::vector<TrainingPair>& dataset, const FreqSrConfig& cfg, int epochs, double lr,
                  std::uint64_t seed) {
  if (dataset.empty()) throw EmptyDataset("no training pairs");
  if (epochs < 0) throw InvalidArgument("epochs must be >= 0");
  for (const auto& p : dataset) {
    if (!p.input.same_shape(p.target) || !p.input.same_shape(dataset.front().input)) {
      throw ShapeMismatch("training pairs are not shape-consistent");
    }
  }
  TrainResult result{init_model(cfg, seed), {}};
  std::mt19937_64 shuffle_rng(seed ^ 0x5DEECE66DULL);
  std::vector<std::size_t> order(dataset.size());
  const AdamOptions opt{.lr = lr};
  for (int e = 0; e < epochs; ++e) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double sum = 0;
    for (std::size_t i : order) sum += train_step(result.model, dataset[i].input, dataset[i].target, opt);
    result.epoch_loss.push_back(sum / static_cast<double>(dataset.size()));
  }
  return result;
}

Tensor4 to_tensor(const FreqTensor& t) {
  Tensor4 out(kBlockArea, t.rows(), t.cols());
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, kBlockArea, Eigen::RowMajor>> src(
      t.values().data(), static_cast<Eigen::Index>(t.rows()) * t.cols(), kBlockArea);
  out.data = src.transpose();
  return out;
}

FreqTensor to_freq_tensor(const Tensor4& t) {
  if (t.channels() != kBlockArea) throw ShapeMismatch("FreqTensor needs 64 channels");
  FreqTensor out(t.height, t.width, 0, 0);
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, kBlockArea, Eigen::RowMajor>> dst(
      out.values().data(), static_cast<Eigen::Index>(t.pixels()), kBlockArea);
  dst = t.data.transpose();
  out.fit_value_range();
  return out;
}

// FSRW layout: "FSRW", u8 version, u32 tensor count, then per tensor
// u32 name length, name bytes, u32 ndim, u32 dims[ndim], f64 payload.
namespace {

constexpr std::uint8_t kFsrwVersion = 1;

struct NamedTensor {
  std::vector<std::uint32_t> dims;
  std::vector<double> values;
};

void put_tensor(detail::ByteWriter& w, const std::string& name, const std::vector<std::uint32_t>& dims,
                const double* data, std::size_t n) {
  w.u32(static_cast<std::uint32_t>(name.size()));
  w.bytes(name.data(), name.size());
  w.u32(static_cast<std::uint32_t>(dims.size()));
  for (auto d : dims) w.u32(d);
  for (std::size_t i = 0; i < n; ++i) w.f64(data[i]);
}

std::vector<std::uint32_t> weight_dims(const Conv& c) {
  const auto out = static_cast<std::uint32_t>(c.out_channels());
  return {out, c.depthwise ? 1u : static_cast<std::uint32_t>(c.in_channels()), 3, 3};
}

// Weight matrices are column-major in memory; the file is row-major.
std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> v(static_cast<std::size_t>(m.size()));
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), m.rows(), m.cols()) =
      m;
  return v;
}

void put_matrix(detail::ByteWriter& w, const std::string& name, const std::vector<std::uint32_t>& dims,
                const Eigen::MatrixXd& m) {
  const auto v = row_major(m);
  put_tensor(w, name, dims, v.data(), v.size());
}

void take_matrix(std::map<std::string, NamedTensor>& tensors, const std::string& name,
                 const std::vector<std::uint32_t>& dims, Eigen::MatrixXd& m) {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw FormatError("FSRW: missing tensor " + name);
  if (it->second.dims != dims) throw FormatError("FSRW: tensor " + name + " has unexpected dims");
  m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      it->second.values.data(), m.rows(), m.cols());
  tensors.erase(it);
}

void take_vector(std::map<std::string, NamedTensor>& tensors, const std::string& name, Eigen::VectorXd& v) {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw FormatError("FSRW: missing tensor " + name);
  if (it->second.dims != std::vector<std::uint32_t>{static_cast<std::uint32_t>(v.size())}) {
    throw FormatError("FSRW: tensor " + name + " has unexpected dims");
  }
  v = Eigen::Map<const Eigen::VectorXd>(it->second.values.data(), v.size());
  tensors.erase(it);
}

}  // namespace

std::vector<std::uint8_t> serialize_weights(const FreqSrModel& model) {
  const auto convs = model.convs();
  const auto names = model.conv_names();
  const bool has_adam = model.adam.m.size() == convs.size();
  const std::size_t count = 2 + convs.size() * (has_adam ? 6 : 2);

  detail::ByteWriter w;
  w.bytes("FSRW", 4);
  w.u8(kFsrwVersion);
  w.u32(static_cast<std::uint32_t>(count));
  const auto& cfg = model.config;
  const double config[] = {static_cast<double>(cfg.in_channels), static_cast<double>(cfg.feature_width),
                           static_cast<double>(cfg.depthwise_blocks), static_cast<double>(cfg.standard_blocks),
                           static_cast<double>(cfg.out_channels)};
  put_tensor(w, "config", {5}, config, 5);
  const double step = static_cast<double>(model.adam.step);
  put_tensor(w, "adam.step", {1}, &step, 1);
  for (std::size_t i = 0; i < convs.size(); ++i) {
    const auto dims = weight_dims(*convs[i]);
    const std::vector<std::uint32_t> bdims{static_cast<std::uint32_t>(convs[i]->bias.size())};
    put_matrix(w, names[i] + ".weight", dims, convs[i]->weight);
    put_tensor(w, names[i] + ".bias", bdims, convs[i]->bias.data(), convs[i]->bias.size());
    if (has_adam) {
      put_matrix(w, "adam.m." + names[i] + ".weight", dims, model.adam.m[i].weight);
      put_tensor(w, "adam.m." + names[i] + ".bias", bdims, model.adam.m[i].bias.data(), model.adam.m[i].bias.size());
      put_matrix(w, "adam.v." + names[i] + ".weight", dims, model.adam.v[i].weight);
      put_tensor(w, "adam.v." + names[i] + ".bias", bdims, model.adam.v[i].bias.data(), model.adam.v[i].bias.size());
    }
  }
  return std::move(w.buffer());
}

FreqSrModel deserialize_weights(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "FSRW");
  if (r.str(4) != "FSRW") throw FormatError("FSRW: bad magic");
  if (const auto v = r.u8(); v != kFsrwVersion) throw FormatError("FSRW: unsupported version " + std::to_string(v));
  const std::uint32_t count = r.u32();
  std::map<std::string, NamedTensor> tensors;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = r.str(r.u32());
    NamedTensor t;
    const std::uint32_t ndim = r.u32();
    if (ndim > 8) throw FormatError("FSRW: implausible rank for " + name);
    std::size_t n = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      t.dims.push_back(r.u32());
      n *= t.dims.back();
    }
    if (n > r.remaining() / 8) throw FormatError("FSRW: truncated payload for " + name);
    t.values.resize(n);
    for (auto& v : t.values) v = r.f64();
    if (!tensors.emplace(name, std::move(t)).second) throw FormatError("FSRW: duplicate tensor " + name);
  }
  if (!r.done()) throw FormatError("FSRW: trailing bytes");

  auto cfg_it = tensors.find("config");
  if (cfg_it == tensors.end() || cfg_it->second.values.size() != 5) throw FormatError("FSRW: missing config");
  const auto& cv = cfg_it->second.values;
  FreqSrConfig cfg{static_cast<int>(cv[0]), static_cast<int>(cv[1]), static_cast<int>(cv[2]), static_cast<int>(cv[3]),
                   static_cast<int>(cv[4])};
  tensors.erase(cfg_it);
  FreqSrModel m;
  try {
    m = make_model(cfg);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("FSRW: bad config: ") + e.what());
  }
  auto step_it = tensors.find("adam.step");
  if (step_it == tensors.end() || step_it->second.values.size() != 1) throw FormatError("FSRW: missing adam.step");
  m.adam.step = static_cast<std::int64_t>(step_it->second.values[0]);
  tensors.erase(step_it);

  auto convs = m.convs();
  const auto names = m.conv_names();
  const bool has_adam = tensors.count("adam.m." + names[0] + ".weight") > 0;
  if (has_adam) {
    m.adam.m.resize(convs.size());
    m.adam.v.resize(convs.size());
  }
  for (std::size_t i = 0; i < convs.size(); ++i) {
    const auto dims = weight_dims(*convs[i]);
    take_matrix(tensors, names[i] + ".weight", dims, convs[i]->weight);
    take_vector(tensors, names[i] + ".bias", convs[i]->bias);
    if (has_adam) {
      for (auto [prefix, state] : {std::pair{"adam.m.", &m.adam.m[i]}, std::pair{"adam.v.", &m.adam.v[i]}}) {
        ensure_grad(*state, *convs[i]);
        take_matrix(tensors, std::string(prefix) + names[i] + ".weight", dims, state->weight);
        take_vector(tensors, std::string(prefix) + names[i] + ".bias", state->bias);
      }
    }
  }
  if (!tensors.empty()) throw FormatError("FSRW: unexpected tensor " + tensors.begin()->first);
  for (const Conv* c : m.convs()) {
    if (!c->weight.allFinite() || !c->bias.allFinite()) throw FormatError("FSRW: non-finite weights");
  }
  return m;
}

void save_weights(const FreqSrModel& model, const std::filesystem::path& path) {
  detail::write_file(path.string(), serialize_weights(model));
}

FreqSrModel load_weights(const std::filesystem::path& path) {
  return deserialize_weights(detail::read_file(path.string()));
}

}  // namespace freqsr::nn
