#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrtfup/cubesphere.hpp"
#include "hrtfup/random.hpp"

namespace hrtfup::neural {

inline constexpr int kNumPanels = 5;

// Batched activations: [sample][channel][panel][i][j], j fastest. Values may
// be any sign (unlike the magnitude PanelTensor).
struct Batch {
  int count = 0;
  int channels = 0;
  int width = 0;
  int height = 0;
  std::vector<double> values;

  static Batch zeros(int count, int channels, int width, int height);

  std::size_t plane() const {
    return static_cast<std::size_t>(width) * height;
  }
  std::size_t sample_stride() const {
    return static_cast<std::size_t>(channels) * kNumPanels * plane();
  }
  double* sample(int n) { return values.data() + n * sample_stride(); }
  const double* sample(int n) const {
    return values.data() + n * sample_stride();
  }
  std::size_t flat(int n, int c, int panel0, int i, int j) const {
    return ((static_cast<std::size_t>(n) * channels + c) * kNumPanels +
            panel0) *
               plane() +
           static_cast<std::size_t>(i) * height + j;
  }
  double& at(int n, int c, int panel0, int i, int j) {
    return values[flat(n, c, panel0, i, j)];
  }
  double at(int n, int c, int panel0, int i, int j) const {
    return values[flat(n, c, panel0, i, j)];
  }
};

Batch batch_from_tensor(const cubesphere::PanelTensor& t);
Batch batch_from_tensors(const std::vector<const cubesphere::PanelTensor*>& ts);
cubesphere::PanelTensor tensor_from_batch(const Batch& b, int sample);

// Adjacency padding applied per sample and channel (same source map as
// cubesphere::pad).
Batch pad_batch(const Batch& x, int p);
// Transpose of pad_batch: folds padded-cell gradients back onto their source
// cells.
Batch unpad_scatter(const Batch& gpadded, int width, int p);

struct ParamRef {
  std::string name;
  std::vector<double>* value = nullptr;
  std::vector<double>* grad = nullptr;  // null for non-trainable state
  bool trainable = true;
};

// Panel-aware convolution: one weight set shared by the four equatorial
// panels, a second set for the top panel. Odd kernel, adjacency padding
// (k-1)/2, optional stride.
class PanelConv {
 public:
  PanelConv() = default;
  PanelConv(int in_channels, int out_channels, int kernel, int stride,
            int input_width);

  void init(Rng& rng);
  Batch forward(const Batch& x);
  Batch backward(const Batch& gy);
  void collect(const std::string& prefix, std::vector<ParamRef>& out);
  void zero_grads();

  int out_width() const { return out_width_; }
  int kernel() const { return kernel_; }

  std::vector<double> weights_eq, weights_top;  // [co][ci][a][b]
  std::vector<double> bias_eq, bias_top;
  std::vector<double> gw_eq, gw_top, gb_eq, gb_top;

 private:
  int in_channels_ = 0, out_channels_ = 0, kernel_ = 1, stride_ = 1;
  int input_width_ = 0, out_width_ = 0, pad_ = 0;
  Batch cached_padded_;
};

// Per-channel batch normalisation over (sample, panel, i, j). Batch
// statistics while training, running averages (momentum 0.9) at inference.
class BatchNorm {
 public:
  BatchNorm() = default;
  explicit BatchNorm(int channels);

  Batch forward(const Batch& x, bool training);
  Batch backward(const Batch& gy);
  void collect(const std::string& prefix, std::vector<ParamRef>& out);
  void zero_grads();

  std::vector<double> gamma, beta, running_mean, running_var;
  std::vector<double> ggamma, gbeta;
  double momentum = 0.9;
  double epsilon = 1e-5;

 private:
  int channels_ = 0;
  Batch cached_xhat_;
  std::vector<double> cached_invstd_;
};

// f(x) = max(ax, x) with a single learned slope.
class PReLU {
 public:
  PReLU() : slope(1, 0.25), gslope(1, 0.0) {}

  Batch forward(const Batch& x);
  Batch backward(const Batch& gy);
  void collect(const std::string& prefix, std::vector<ParamRef>& out);
  void zero_grads() { gslope[0] = 0.0; }

  std::vector<double> slope, gslope;

 private:
  Batch cached_input_;
};

// f(x) = max(ax, x) with a fixed slope.
class LeakyReLU {
 public:
  explicit LeakyReLU(double slope = 0.2) : slope_(slope) {}
  Batch forward(const Batch& x);
  Batch backward(const Batch& gy);

 private:
  double slope_ = 0.2;
  Batch cached_input_;
};

class Softplus {
 public:
  Batch forward(const Batch& x);
  Batch backward(const Batch& gy);

 private:
  Batch cached_input_;
};

// Channel-to-space rearrangement by a factor of 2 per axis (4C -> C).
class DepthToSpace {
 public:
  Batch forward(const Batch& x);
  Batch backward(const Batch& gy);
};

// Fully connected layer on flattened samples.
class Dense {
 public:
  Dense() = default;
  Dense(int in_features, int out_features);

  void init(Rng& rng);
  // x: [count x in_features] row-major.
  std::vector<double> forward(const std::vector<double>& x, int count);
  std::vector<double> backward(const std::vector<double>& gy, int count);
  void collect(const std::string& prefix, std::vector<ParamRef>& out);
  void zero_grads();

  int in_features() const { return in_; }
  int out_features() const { return out_; }

  std::vector<double> weights, bias;  // weights [out][in]
  std::vector<double> gweights, gbias;

 private:
  int in_ = 0, out_ = 0;
  std::vector<double> cached_input_;
};

// Element-wise logistic function on flat vectors.
std::vector<double> sigmoid(const std::vector<double>& x);
std::vector<double> sigmoid_backward(const std::vector<double>& y,
                                     const std::vector<double>& gy);

}  // namespace hrtfup::neural
