#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hrtfup/types.hpp"

namespace hrtfup::itd {

struct KalmanConfig {
  double process_variance = 1.0;      // sigma_w^2
  double measurement_variance = 1.0;  // sigma_v^2
  double threshold = 1.0;             // onset trigger on |residual|
  double initial_state = 0.0;
  double initial_variance = 1.0;

  void validate() const;
};

struct KalmanState {
  double state_estimate = 0.0;  // x hat
  double variance = 0.0;        // P
  // Per-step quantities of the most recent update.
  double innovation_variance = 0.0;  // S
  double gain = 0.0;                 // K
  double residual = 0.0;             // y tilde
};

KalmanState kalman_init(const KalmanConfig& cfg);

// One predict/update cycle of the scalar random-walk filter. Returns the
// post-update residual z - x_hat.
double kalman_step(KalmanState& state, double z, const KalmanConfig& cfg);

// Spec defaults: filter |ir|, sigma_v = median of the first 8 absolute
// samples (floored at 1e-12), sigma_w^2 = sigma_v^2/10, threshold
// 20*sigma_v, x0 = |ir[0]|, P0 = sigma_v^2.
KalmanConfig default_config_for(std::span<const float> ir);

struct KalmanOverrides {
  std::optional<double> process_variance;
  std::optional<double> measurement_variance;
  std::optional<double> threshold;
  std::optional<double> initial_state;
  std::optional<double> initial_variance;
};

KalmanConfig resolve_config(std::span<const float> ir,
                            const KalmanOverrides& overrides);

// Smallest n with |residual at n| > threshold, filtering |ir[n]|.
// Throws Error(data, "no onset detected") when nothing triggers.
int detect_onset(std::span<const float> ir, const KalmanConfig& cfg);

struct OnsetRecord {
  int position = 0;
  int ear = 0;  // 0 = left, 1 = right
  int onset = 0;
};

// Trims every IR (per ear, independently) so its detected onset lands at
// pre_roll; output IRs have length_out taps.
HrirSet align_set(const HrirSet& set, const KalmanOverrides& overrides,
                  int pre_roll, int length_out,
                  std::vector<OnsetRecord>* onsets = nullptr);

// Spherical-head model: ITD = (r/c)(theta_I + sin(theta_I)),
// theta_I = arcsin(sin(azimuth) * cos(elevation)). Positive means the right
// ear lags for azimuth in (0, pi).
double itd_model(const SphericalDirection& dir, double head_radius_m = 0.0875,
                 double speed_m_s = 343.0);

// Delays the lagging ear by round(|itd_s| * fs) samples (front zero-pad,
// tail truncated).
StereoIr apply_itd(std::span<const float> left, std::span<const float> right,
                   double itd_s, int sample_rate_hz);

}  // namespace hrtfup::itd
