#pragma once

#include <span>
#include <vector>

#include "hrtfup/cubesphere.hpp"
#include "hrtfup/neural/layers.hpp"

namespace hrtfup::neural {

// Mean over positions of the per-position RMS (over all channels: both ears'
// bins pooled) of the dB log ratio. Magnitudes are floored before the logs.
double lsd(const cubesphere::PanelTensor& reference,
           const cubesphere::PanelTensor& test);
double lsd_batch(const Batch& reference, const Batch& test,
                 Batch* grad_test = nullptr);

// Mean absolute difference of inter-ear dB ratios, averaged over bins then
// positions. Channels 0..C/2-1 are the left ear.
double ild(const cubesphere::PanelTensor& reference,
           const cubesphere::PanelTensor& test);
double ild_batch(const Batch& reference, const Batch& test,
                 Batch* grad_test = nullptr);

// Binary cross-entropy over a batch of probabilities; outputs are clamped to
// [eps, 1-eps] inside the logs.
double bce_loss(std::span<const double> outputs,
                std::span<const double> labels,
                std::vector<double>* grad_outputs = nullptr);

// Content loss LSD/c_lsd + ILD/c_ild with the constants frozen from the
// first batch it sees.
class ContentLoss {
 public:
  double operator()(const Batch& reference, const Batch& test,
                    Batch* grad_test = nullptr);

  bool frozen() const { return frozen_; }
  double lsd_norm() const { return c_lsd_; }
  double ild_norm() const { return c_ild_; }
  void freeze(double c_lsd, double c_ild);

 private:
  bool frozen_ = false;
  double c_lsd_ = 1.0;
  double c_ild_ = 1.0;
};

}  // namespace hrtfup::neural
