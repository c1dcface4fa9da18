#include "hrtfup/neural/layers.hpp"

#include <cmath>
#include <map>

#include "hrtfup/error.hpp"

namespace hrtfup::neural {

Batch Batch::zeros(int count, int channels, int width, int height) {
  Batch b;
  b.count = count;
  b.channels = channels;
  b.width = width;
  b.height = height;
  b.values.assign(static_cast<std::size_t>(count) * channels * kNumPanels *
                      width * height,
                  0.0);
  return b;
}

Batch batch_from_tensor(const cubesphere::PanelTensor& t) {
  return batch_from_tensors({&t});
}

Batch batch_from_tensors(
    const std::vector<const cubesphere::PanelTensor*>& ts) {
  if (ts.empty()) throw_invalid("batch: empty tensor list");
  const int c = ts[0]->channels, w = ts[0]->width, h = ts[0]->height;
  Batch b = Batch::zeros(static_cast<int>(ts.size()), c, w, h);
  for (std::size_t n = 0; n < ts.size(); ++n) {
    if (ts[n]->channels != c || ts[n]->width != w || ts[n]->height != h) {
      throw_data("batch: inconsistent tensor shapes");
    }
    std::copy(ts[n]->values.begin(), ts[n]->values.end(),
              b.values.begin() + n * b.sample_stride());
  }
  return b;
}

cubesphere::PanelTensor tensor_from_batch(const Batch& b, int sample) {
  cubesphere::PanelTensor t;
  t.channels = b.channels;
  t.width = b.width;
  t.height = b.height;
  t.values.assign(b.sample(sample), b.sample(sample) + b.sample_stride());
  return t;
}

namespace {

// Pad maps keyed by (width, pad); built once, reused by every layer.
const std::vector<std::int32_t>& pad_map_for(int width, int p) {
  static std::map<std::pair<int, int>, std::vector<std::int32_t>> cache;
  auto key = std::make_pair(width, p);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, cubesphere::make_pad_map(width, p)).first;
  }
  return it->second;
}

}  // namespace

Batch pad_batch(const Batch& x, int p) {
  if (p == 0) return x;
  const auto& map = pad_map_for(x.width, p);
  const int wp = x.width + 2 * p;
  Batch out = Batch::zeros(x.count, x.channels, wp, wp);
  const std::size_t planes = static_cast<std::size_t>(x.count) * x.channels;
  const std::size_t in_stride =
      static_cast<std::size_t>(kNumPanels) * x.plane();
  const std::size_t out_stride = map.size();
  for (std::size_t q = 0; q < planes; ++q) {
    const double* src = x.values.data() + q * in_stride;
    double* dst = out.values.data() + q * out_stride;
    for (std::size_t k = 0; k < out_stride; ++k) dst[k] = src[map[k]];
  }
  return out;
}

Batch unpad_scatter(const Batch& gpadded, int width, int p) {
  if (p == 0) return gpadded;
  const auto& map = pad_map_for(width, p);
  Batch out = Batch::zeros(gpadded.count, gpadded.channels, width, width);
  const std::size_t planes =
      static_cast<std::size_t>(gpadded.count) * gpadded.channels;
  const std::size_t out_stride =
      static_cast<std::size_t>(kNumPanels) * out.plane();
  const std::size_t in_stride = map.size();
  for (std::size_t q = 0; q < planes; ++q) {
    const double* src = gpadded.values.data() + q * in_stride;
    double* dst = out.values.data() + q * out_stride;
    for (std::size_t k = 0; k < in_stride; ++k) dst[map[k]] += src[k];
  }
  return out;
}

PanelConv::PanelConv(int in_channels, int out_channels, int kernel, int stride,
                     int input_width)
    : in_channels_(in_channels),
      out_channels_(out_channels),
      kernel_(kernel),
      stride_(stride),
      input_width_(input_width) {
  if (kernel % 2 != 1) throw_invalid("conv: kernel must be odd");
  pad_ = (kernel - 1) / 2;
  if (pad_ >= input_width) {
    throw_invalid("conv: padding requires p < W");
  }
  out_width_ = (input_width + 2 * pad_ - kernel) / stride + 1;
  const std::size_t wcount = static_cast<std::size_t>(out_channels) *
                             in_channels * kernel * kernel;
  weights_eq.assign(wcount, 0.0);
  weights_top.assign(wcount, 0.0);
  bias_eq.assign(out_channels, 0.0);
  bias_top.assign(out_channels, 0.0);
  gw_eq.assign(wcount, 0.0);
  gw_top.assign(wcount, 0.0);
  gb_eq.assign(out_channels, 0.0);
  gb_top.assign(out_channels, 0.0);
}

void PanelConv::init(Rng& rng) {
  const double s =
      1.0 / std::sqrt(static_cast<double>(in_channels_) * kernel_ * kernel_);
  for (double& w : weights_eq) w = rng.uniform(-s, s);
  for (double& w : weights_top) w = rng.uniform(-s, s);
}

Batch PanelConv::forward(const Batch& x) {
  if (x.channels != in_channels_ || x.width != input_width_ ||
      x.height != input_width_) {
    throw_data("conv: input shape mismatch");
  }
  cached_padded_ = pad_batch(x, pad_);
  const Batch& xp = cached_padded_;
  const int wo = out_width_;
  const int wp = xp.width;
  Batch y = Batch::zeros(x.count, out_channels_, wo, wo);

  for (int n = 0; n < x.count; ++n) {
    for (int panel = 0; panel < kNumPanels; ++panel) {
      const bool top = panel == kNumPanels - 1;
      const double* W = top ? weights_top.data() : weights_eq.data();
      const double* B = top ? bias_top.data() : bias_eq.data();
      for (int co = 0; co < out_channels_; ++co) {
        double* out = &y.at(n, co, panel, 0, 0);
        const double b = B[co];
        for (int k = 0; k < wo * wo; ++k) out[k] = b;
        for (int ci = 0; ci < in_channels_; ++ci) {
          const double* in = &xp.at(n, ci, panel, 0, 0);
          const double* wk =
              W + (static_cast<std::size_t>(co) * in_channels_ + ci) *
                      kernel_ * kernel_;
          for (int a = 0; a < kernel_; ++a) {
            for (int bk = 0; bk < kernel_; ++bk) {
              const double wv = wk[a * kernel_ + bk];
              for (int oi = 0; oi < wo; ++oi) {
                const double* row = in + (oi * stride_ + a) * wp + bk;
                double* orow = out + oi * wo;
                if (stride_ == 1) {
                  for (int oj = 0; oj < wo; ++oj) orow[oj] += wv * row[oj];
                } else {
                  for (int oj = 0; oj < wo; ++oj) {
                    orow[oj] += wv * row[oj * stride_];
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return y;
}

Batch PanelConv::backward(const Batch& gy) {
  const Batch& xp = cached_padded_;
  if (gy.channels != out_channels_ || gy.width != out_width_ ||
      gy.count != xp.count) {
    throw_data("conv backward: gradient shape mismatch");
  }
  const int wo = out_width_;
  const int wp = xp.width;
  Batch gxp = Batch::zeros(xp.count, in_channels_, wp, wp);

  for (int n = 0; n < gy.count; ++n) {
    for (int panel = 0; panel < kNumPanels; ++panel) {
      const bool top = panel == kNumPanels - 1;
      const double* W = top ? weights_top.data() : weights_eq.data();
      double* GW = top ? gw_top.data() : gw_eq.data();
      double* GB = top ? gb_top.data() : gb_eq.data();
      for (int co = 0; co < out_channels_; ++co) {
        const double* g = &gy.at(n, co, panel, 0, 0);
        double bsum = 0.0;
        for (int k = 0; k < wo * wo; ++k) bsum += g[k];
        GB[co] += bsum;
        for (int ci = 0; ci < in_channels_; ++ci) {
          const double* in = &xp.at(n, ci, panel, 0, 0);
          double* gin = &gxp.at(n, ci, panel, 0, 0);
          const std::size_t wbase =
              (static_cast<std::size_t>(co) * in_channels_ + ci) * kernel_ *
              kernel_;
          for (int a = 0; a < kernel_; ++a) {
            for (int bk = 0; bk < kernel_; ++bk) {
              const double wv = W[wbase + a * kernel_ + bk];
              double wg = 0.0;
              for (int oi = 0; oi < wo; ++oi) {
                const double* row = in + (oi * stride_ + a) * wp + bk;
                double* grow = gin + (oi * stride_ + a) * wp + bk;
                const double* gr = g + oi * wo;
                if (stride_ == 1) {
                  for (int oj = 0; oj < wo; ++oj) {
                    wg += gr[oj] * row[oj];
                    grow[oj] += wv * gr[oj];
                  }
                } else {
                  for (int oj = 0; oj < wo; ++oj) {
                    wg += gr[oj] * row[oj * stride_];
                    grow[oj * stride_] += wv * gr[oj];
                  }
                }
              }
              GW[wbase + a * kernel_ + bk] += wg;
            }
          }
        }
      }
    }
  }
  return unpad_scatter(gxp, input_width_, pad_);
}

void PanelConv::collect(const std::string& prefix,
                        std::vector<ParamRef>& out) {
  out.push_back({prefix + ".w_eq", &weights_eq, &gw_eq, true});
  out.push_back({prefix + ".w_top", &weights_top, &gw_top, true});
  out.push_back({prefix + ".b_eq", &bias_eq, &gb_eq, true});
  out.push_back({prefix + ".b_top", &bias_top, &gb_top, true});
}

void PanelConv::zero_grads() {
  std::fill(gw_eq.begin(), gw_eq.end(), 0.0);
  std::fill(gw_top.begin(), gw_top.end(), 0.0);
  std::fill(gb_eq.begin(), gb_eq.end(), 0.0);
  std::fill(gb_top.begin(), gb_top.end(), 0.0);
}

BatchNorm::BatchNorm(int channels) : channels_(channels) {
  gamma.assign(channels, 1.0);
  beta.assign(channels, 0.0);
  running_mean.assign(channels, 0.0);
  running_var.assign(channels, 1.0);
  ggamma.assign(channels, 0.0);
  gbeta.assign(channels, 0.0);
}

Batch BatchNorm::forward(const Batch& x, bool training) {
  if (x.channels != channels_) throw_data("batchnorm: channel mismatch");
  const std::size_t per_channel =
      static_cast<std::size_t>(x.count) * kNumPanels * x.plane();
  Batch y = Batch::zeros(x.count, x.channels, x.width, x.height);
  cached_xhat_ = Batch::zeros(x.count, x.channels, x.width, x.height);
  cached_invstd_.assign(channels_, 0.0);

  const std::size_t cstride = static_cast<std::size_t>(kNumPanels) * x.plane();
  for (int c = 0; c < channels_; ++c) {
    double mean, var;
    if (training) {
      double sum = 0.0, sq = 0.0;
      for (int n = 0; n < x.count; ++n) {
        const double* p = x.sample(n) + c * cstride;
        for (std::size_t k = 0; k < cstride; ++k) {
          sum += p[k];
          sq += p[k] * p[k];
        }
      }
      mean = sum / static_cast<double>(per_channel);
      var = sq / static_cast<double>(per_channel) - mean * mean;
      if (var < 0.0) var = 0.0;
      running_mean[c] = momentum * running_mean[c] + (1.0 - momentum) * mean;
      running_var[c] = momentum * running_var[c] + (1.0 - momentum) * var;
    } else {
      mean = running_mean[c];
      var = running_var[c];
    }
    const double invstd = 1.0 / std::sqrt(var + epsilon);
    cached_invstd_[c] = invstd;
    for (int n = 0; n < x.count; ++n) {
      const double* p = x.sample(n) + c * cstride;
      double* xh = cached_xhat_.sample(n) + c * cstride;
      double* out = y.sample(n) + c * cstride;
      for (std::size_t k = 0; k < cstride; ++k) {
        xh[k] = (p[k] - mean) * invstd;
        out[k] = gamma[c] * xh[k] + beta[c];
      }
    }
  }
  return y;
}

Batch BatchNorm::backward(const Batch& gy) {
  const Batch& xh = cached_xhat_;
  if (gy.channels != channels_ || gy.count != xh.count) {
    throw_data("batchnorm backward: shape mismatch");
  }
  const std::size_t cstride =
      static_cast<std::size_t>(kNumPanels) * gy.plane();
  const double m =
      static_cast<double>(static_cast<std::size_t>(gy.count) * cstride);
  Batch gx = Batch::zeros(gy.count, gy.channels, gy.width, gy.height);
  for (int c = 0; c < channels_; ++c) {
    double sum_gy = 0.0, sum_gy_xh = 0.0;
    for (int n = 0; n < gy.count; ++n) {
      const double* g = gy.sample(n) + c * cstride;
      const double* h = xh.sample(n) + c * cstride;
      for (std::size_t k = 0; k < cstride; ++k) {
        sum_gy += g[k];
        sum_gy_xh += g[k] * h[k];
      }
    }
    ggamma[c] += sum_gy_xh;
    gbeta[c] += sum_gy;
    const double scale = gamma[c] * cached_invstd_[c];
    for (int n = 0; n < gy.count; ++n) {
      const double* g = gy.sample(n) + c * cstride;
      const double* h = xh.sample(n) + c * cstride;
      double* out = gx.sample(n) + c * cstride;
      for (std::size_t k = 0; k < cstride; ++k) {
        out[k] = scale * (g[k] - sum_gy / m - h[k] * sum_gy_xh / m);
      }
    }
  }
  return gx;
}

void BatchNorm::collect(const std::string& prefix,
                        std::vector<ParamRef>& out) {
  out.push_back({prefix + ".gamma", &gamma, &ggamma, true});
  out.push_back({prefix + ".beta", &beta, &gbeta, true});
  out.push_back({prefix + ".running_mean", &running_mean, nullptr, false});
  out.push_back({prefix + ".running_var", &running_var, nullptr, false});
}

void BatchNorm::zero_grads() {
  std::fill(ggamma.begin(), ggamma.end(), 0.0);
  std::fill(gbeta.begin(), gbeta.end(), 0.0);
}

Batch PReLU::forward(const Batch& x) {
  cached_input_ = x;
  Batch y = x;
  const double a = slope[0];
  for (double& v : y.values) {
    if (v < 0.0) v *= a;
  }
  return y;
}

Batch PReLU::backward(const Batch& gy) {
  const Batch& x = cached_input_;
  Batch gx = gy;
  const double a = slope[0];
  double ga = 0.0;
  for (std::size_t k = 0; k < gx.values.size(); ++k) {
    if (x.values[k] < 0.0) {
      ga += gy.values[k] * x.values[k];
      gx.values[k] *= a;
    }
  }
  gslope[0] += ga;
  return gx;
}

void PReLU::collect(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".slope", &slope, &gslope, true});
}

Batch LeakyReLU::forward(const Batch& x) {
  cached_input_ = x;
  Batch y = x;
  for (double& v : y.values) {
    if (v < 0.0) v *= slope_;
  }
  return y;
}

Batch LeakyReLU::backward(const Batch& gy) {
  Batch gx = gy;
  for (std::size_t k = 0; k < gx.values.size(); ++k) {
    if (cached_input_.values[k] < 0.0) gx.values[k] *= slope_;
  }
  return gx;
}

namespace {
double softplus_value(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

Batch Softplus::forward(const Batch& x) {
  cached_input_ = x;
  Batch y = x;
  for (double& v : y.values) v = softplus_value(v);
  return y;
}

Batch Softplus::backward(const Batch& gy) {
  Batch gx = gy;
  for (std::size_t k = 0; k < gx.values.size(); ++k) {
    gx.values[k] *= logistic(cached_input_.values[k]);
  }
  return gx;
}

Batch DepthToSpace::forward(const Batch& x) {
  if (x.channels % 4 != 0) throw_data("depth_to_space: channels not 4*C");
  const int co = x.channels / 4;
  const int wo = x.width * 2;
  Batch y = Batch::zeros(x.count, co, wo, wo);
  for (int n = 0; n < x.count; ++n) {
    for (int c = 0; c < co; ++c) {
      for (int panel = 0; panel < kNumPanels; ++panel) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const int ci = (c * 2 + a) * 2 + b;
            for (int i = 0; i < x.width; ++i) {
              for (int j = 0; j < x.height; ++j) {
                y.at(n, c, panel, 2 * i + a, 2 * j + b) =
                    x.at(n, ci, panel, i, j);
              }
            }
          }
        }
      }
    }
  }
  return y;
}

Batch DepthToSpace::backward(const Batch& gy) {
  if (gy.width % 2 != 0) throw_data("depth_to_space backward: odd width");
  const int ci = gy.channels * 4;
  const int wi = gy.width / 2;
  Batch gx = Batch::zeros(gy.count, ci, wi, wi);
  for (int n = 0; n < gy.count; ++n) {
    for (int c = 0; c < gy.channels; ++c) {
      for (int panel = 0; panel < kNumPanels; ++panel) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const int cc = (c * 2 + a) * 2 + b;
            for (int i = 0; i < wi; ++i) {
              for (int j = 0; j < wi; ++j) {
                gx.at(n, cc, panel, i, j) =
                    gy.at(n, c, panel, 2 * i + a, 2 * j + b);
              }
            }
          }
        }
      }
    }
  }
  return gx;
}

Dense::Dense(int in_features, int out_features)
    : in_(in_features), out_(out_features) {
  weights.assign(static_cast<std::size_t>(in_) * out_, 0.0);
  bias.assign(out_, 0.0);
  gweights.assign(weights.size(), 0.0);
  gbias.assign(out_, 0.0);
}

void Dense::init(Rng& rng) {
  const double s = 1.0 / std::sqrt(static_cast<double>(in_));
  for (double& w : weights) w = rng.uniform(-s, s);
}

std::vector<double> Dense::forward(const std::vector<double>& x, int count) {
  if (x.size() != static_cast<std::size_t>(count) * in_) {
    throw_data("dense: input size mismatch");
  }
  cached_input_ = x;
  std::vector<double> y(static_cast<std::size_t>(count) * out_);
  for (int n = 0; n < count; ++n) {
    const double* xi = x.data() + static_cast<std::size_t>(n) * in_;
    double* yo = y.data() + static_cast<std::size_t>(n) * out_;
    for (int o = 0; o < out_; ++o) {
      const double* w = weights.data() + static_cast<std::size_t>(o) * in_;
      double acc = bias[o];
      for (int i = 0; i < in_; ++i) acc += w[i] * xi[i];
      yo[o] = acc;
    }
  }
  return y;
}

std::vector<double> Dense::backward(const std::vector<double>& gy,
                                    int count) {
  std::vector<double> gx(static_cast<std::size_t>(count) * in_, 0.0);
  for (int n = 0; n < count; ++n) {
    const double* xi =
        cached_input_.data() + static_cast<std::size_t>(n) * in_;
    const double* g = gy.data() + static_cast<std::size_t>(n) * out_;
    double* gxo = gx.data() + static_cast<std::size_t>(n) * in_;
    for (int o = 0; o < out_; ++o) {
      double* gw = gweights.data() + static_cast<std::size_t>(o) * in_;
      const double* w = weights.data() + static_cast<std::size_t>(o) * in_;
      const double go = g[o];
      gbias[o] += go;
      for (int i = 0; i < in_; ++i) {
        gw[i] += go * xi[i];
        gxo[i] += go * w[i];
      }
    }
  }
  return gx;
}

void Dense::collect(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".w", &weights, &gweights, true});
  out.push_back({prefix + ".b", &bias, &gbias, true});
}

void Dense::zero_grads() {
  std::fill(gweights.begin(), gweights.end(), 0.0);
  std::fill(gbias.begin(), gbias.end(), 0.0);
}

std::vector<double> sigmoid(const std::vector<double>& x) {
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = logistic(x[k]);
  return y;
}

std::vector<double> sigmoid_backward(const std::vector<double>& y,
                                     const std::vector<double>& gy) {
  std::vector<double> gx(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    gx[k] = gy[k] * y[k] * (1.0 - y[k]);
  }
  return gx;
}

}  // namespace hrtfup::neural
