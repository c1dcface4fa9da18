#include "hrtfup/neural/losses.hpp"

#include <cmath>

#include "hrtfup/error.hpp"
#include "hrtfup/spectra.hpp"

namespace hrtfup::neural {

namespace {

constexpr double kDbFactor = 20.0 / 2.302585092994045684;  // 20/ln(10)
constexpr double kBceEps = 1e-7;

double floored(double v) { return std::max(v, spectra::kMagnitudeFloor); }

void check_same_shape(const Batch& a, const Batch& b) {
  if (a.count != b.count || a.channels != b.channels || a.width != b.width ||
      a.height != b.height) {
    throw_data("loss: shape mismatch");
  }
}

}  // namespace

double lsd_batch(const Batch& reference, const Batch& test, Batch* grad_test) {
  check_same_shape(reference, test);
  if (grad_test) {
    *grad_test = Batch::zeros(test.count, test.channels, test.width,
                              test.height);
  }
  const int c = reference.channels;
  const std::size_t plane =
      static_cast<std::size_t>(kNumPanels) * reference.plane();
  const std::size_t positions =
      static_cast<std::size_t>(reference.count) * plane;
  const std::size_t cstride = plane;

  double total = 0.0;
  std::vector<double> diffs(c);
  for (int n = 0; n < reference.count; ++n) {
    const double* r = reference.sample(n);
    const double* t = test.sample(n);
    double* g = grad_test ? grad_test->sample(n) : nullptr;
    for (std::size_t pos = 0; pos < plane; ++pos) {
      double sq = 0.0;
      for (int ch = 0; ch < c; ++ch) {
        const double rv = floored(r[ch * cstride + pos]);
        const double tv = floored(t[ch * cstride + pos]);
        const double d = kDbFactor * std::log(rv / tv);
        diffs[ch] = d;
        sq += d * d;
      }
      const double rms = std::sqrt(sq / c);
      total += rms;
      if (g && rms > 1e-12) {
        // d rms / d t_ch = -(kDbFactor / t_ch) * d_ch / (c * rms); the floor
        // zeroes the gradient of clamped entries.
        const double scale = 1.0 / (c * rms * positions);
        for (int ch = 0; ch < c; ++ch) {
          const double tv = t[ch * cstride + pos];
          if (tv > spectra::kMagnitudeFloor) {
            g[ch * cstride + pos] += -kDbFactor / tv * diffs[ch] * scale;
          }
        }
      }
    }
  }
  return total / static_cast<double>(positions);
}

double ild_batch(const Batch& reference, const Batch& test, Batch* grad_test) {
  check_same_shape(reference, test);
  if (reference.channels % 2 != 0) throw_data("ild: odd channel count");
  if (grad_test) {
    *grad_test = Batch::zeros(test.count, test.channels, test.width,
                              test.height);
  }
  const int bins = reference.channels / 2;
  const std::size_t plane =
      static_cast<std::size_t>(kNumPanels) * reference.plane();
  const std::size_t positions =
      static_cast<std::size_t>(reference.count) * plane;
  const std::size_t cstride = plane;
  const double denom = static_cast<double>(positions) * bins;

  double total = 0.0;
  for (int n = 0; n < reference.count; ++n) {
    const double* r = reference.sample(n);
    const double* t = test.sample(n);
    double* g = grad_test ? grad_test->sample(n) : nullptr;
    for (std::size_t pos = 0; pos < plane; ++pos) {
      for (int b = 0; b < bins; ++b) {
        const std::size_t il = b * cstride + pos;
        const std::size_t ir = (b + bins) * cstride + pos;
        const double ild_ref =
            kDbFactor * std::log(floored(r[il]) / floored(r[ir]));
        const double tl = floored(t[il]);
        const double tr = floored(t[ir]);
        const double ild_test = kDbFactor * std::log(tl / tr);
        const double d = ild_ref - ild_test;
        total += std::abs(d);
        if (g && d != 0.0) {
          const double sgn = d > 0.0 ? 1.0 : -1.0;
          // d|d|/d tl = -sgn * d(ild_test)/d tl = -sgn * kDbFactor / tl
          if (t[il] > spectra::kMagnitudeFloor) {
            g[il] += -sgn * kDbFactor / tl / denom;
          }
          if (t[ir] > spectra::kMagnitudeFloor) {
            g[ir] += sgn * kDbFactor / tr / denom;
          }
        }
      }
    }
  }
  return total / denom;
}

double lsd(const cubesphere::PanelTensor& reference,
           const cubesphere::PanelTensor& test) {
  return lsd_batch(batch_from_tensor(reference), batch_from_tensor(test));
}

double ild(const cubesphere::PanelTensor& reference,
           const cubesphere::PanelTensor& test) {
  return ild_batch(batch_from_tensor(reference), batch_from_tensor(test));
}

double bce_loss(std::span<const double> outputs,
                std::span<const double> labels,
                std::vector<double>* grad_outputs) {
  if (outputs.size() != labels.size() || outputs.empty()) {
    throw_invalid("bce: outputs/labels size mismatch");
  }
  for (double d : outputs) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw_numeric("bce: output probability outside [0, 1]");
    }
  }
  const double m = static_cast<double>(outputs.size());
  if (grad_outputs) grad_outputs->assign(outputs.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const double d = std::clamp(outputs[k], kBceEps, 1.0 - kBceEps);
    const double y = labels[k];
    total += -(y * std::log(d) + (1.0 - y) * std::log(1.0 - d));
    if (grad_outputs) {
      (*grad_outputs)[k] = -(y / d - (1.0 - y) / (1.0 - d)) / m;
    }
  }
  return total / m;
}

void ContentLoss::freeze(double c_lsd, double c_ild) {
  c_lsd_ = c_lsd > 0.0 ? c_lsd : 1.0;
  c_ild_ = c_ild > 0.0 ? c_ild : 1.0;
  frozen_ = true;
}

double ContentLoss::operator()(const Batch& reference, const Batch& test,
                               Batch* grad_test) {
  Batch glsd, gild;
  const double raw_lsd =
      lsd_batch(reference, test, grad_test ? &glsd : nullptr);
  const double raw_ild =
      ild_batch(reference, test, grad_test ? &gild : nullptr);
  if (!frozen_) freeze(raw_lsd, raw_ild);
  if (grad_test) {
    *grad_test = Batch::zeros(test.count, test.channels, test.width,
                              test.height);
    for (std::size_t k = 0; k < grad_test->values.size(); ++k) {
      grad_test->values[k] =
          glsd.values[k] / c_lsd_ + gild.values[k] / c_ild_;
    }
  }
  return raw_lsd / c_lsd_ + raw_ild / c_ild_;
}

}  // namespace hrtfup::neural
