#include "hrtfup/itd.hpp"

#include <algorithm>
#include <cmath>

#include "hrtfup/error.hpp"

namespace hrtfup::itd {

void KalmanConfig::validate() const {
  if (process_variance <= 0.0 || measurement_variance <= 0.0) {
    throw_invalid("kalman: variances must be positive");
  }
  if (threshold <= 0.0) throw_invalid("kalman: threshold must be positive");
  if (initial_variance < 0.0) {
    throw_invalid("kalman: initial variance must be non-negative");
  }
}

KalmanState kalman_init(const KalmanConfig& cfg) {
  KalmanState s;
  s.state_estimate = cfg.initial_state;
  s.variance = cfg.initial_variance;
  return s;
}

double kalman_step(KalmanState& state, double z, const KalmanConfig& cfg) {
  const double x_pred = state.state_estimate;
  const double p_pred = state.variance + cfg.process_variance;
  const double s = p_pred + cfg.measurement_variance;
  const double k = p_pred / s;
  const double x = x_pred + k * (z - x_pred);
  state.state_estimate = x;
  state.variance = (1.0 - k) * (1.0 - k) * p_pred +
                   k * k * cfg.measurement_variance;
  state.innovation_variance = s;
  state.gain = k;
  state.residual = z - x;
  return state.residual;
}

KalmanConfig default_config_for(std::span<const float> ir) {
  if (ir.empty()) throw_invalid("kalman defaults: empty IR");
  std::vector<double> head;
  head.reserve(8);
  for (std::size_t i = 0; i < std::min<std::size_t>(8, ir.size()); ++i) {
    head.push_back(std::abs(static_cast<double>(ir[i])));
  }
  std::sort(head.begin(), head.end());
  const std::size_t m = head.size();
  double median = (m % 2 == 1) ? head[m / 2]
                               : 0.5 * (head[m / 2 - 1] + head[m / 2]);
  const double sigma_v = std::max(median, 1e-12);
  KalmanConfig cfg;
  cfg.measurement_variance = sigma_v * sigma_v;
  cfg.process_variance = cfg.measurement_variance / 10.0;
  cfg.threshold = 20.0 * sigma_v;
  cfg.initial_state = std::abs(static_cast<double>(ir[0]));
  cfg.initial_variance = cfg.measurement_variance;
  return cfg;
}

KalmanConfig resolve_config(std::span<const float> ir,
                            const KalmanOverrides& overrides) {
  KalmanConfig cfg = default_config_for(ir);
  if (overrides.measurement_variance) {
    cfg.measurement_variance = *overrides.measurement_variance;
    cfg.process_variance = cfg.measurement_variance / 10.0;
    cfg.threshold = 20.0 * std::sqrt(cfg.measurement_variance);
    cfg.initial_variance = cfg.measurement_variance;
  }
  if (overrides.process_variance) {
    cfg.process_variance = *overrides.process_variance;
  }
  if (overrides.threshold) cfg.threshold = *overrides.threshold;
  if (overrides.initial_state) cfg.initial_state = *overrides.initial_state;
  if (overrides.initial_variance) {
    cfg.initial_variance = *overrides.initial_variance;
  }
  cfg.validate();
  return cfg;
}

int detect_onset(std::span<const float> ir, const KalmanConfig& cfg) {
  if (ir.size() < 2) throw_invalid("detect_onset: IR shorter than 2 samples");
  cfg.validate();
  KalmanState state = kalman_init(cfg);
  for (std::size_t n = 0; n < ir.size(); ++n) {
    const double z = std::abs(static_cast<double>(ir[n]));
    const double resid = kalman_step(state, z, cfg);
    if (std::abs(resid) > cfg.threshold) return static_cast<int>(n);
  }
  throw_data("no onset detected");
}

HrirSet align_set(const HrirSet& set, const KalmanOverrides& overrides,
                  int pre_roll, int length_out,
                  std::vector<OnsetRecord>* onsets) {
  set.validate();
  if (pre_roll < 0) throw_invalid("align: pre_roll must be >= 0");
  if (length_out <= pre_roll) {
    throw_invalid("align: length_out must exceed pre_roll");
  }
  const int taps = set.taps();
  HrirSet out;
  out.subject_id = set.subject_id;
  out.sample_rate_hz = set.sample_rate_hz;
  out.positions = set.positions;
  out.impulse_responses.resize(set.impulse_responses.size());
  for (std::size_t p = 0; p < set.impulse_responses.size(); ++p) {
    for (int ear = 0; ear < 2; ++ear) {
      const std::vector<float>& src = ear == 0
                                          ? set.impulse_responses[p].left
                                          : set.impulse_responses[p].right;
      int onset;
      try {
        onset = detect_onset(src, resolve_config(src, overrides));
      } catch (const Error& e) {
        throw_data("align: position " + std::to_string(p) + " ear " +
                   (ear == 0 ? std::string("left") : std::string("right")) +
                   ": " + e.what());
      }
      if (onsets) {
        onsets->push_back({static_cast<int>(p), ear, onset});
      }
      const int start = onset - pre_roll;
      if (start < 0) {
        throw_data("align: pre_roll exceeds onset at position " +
                   std::to_string(p) + " ear " + std::to_string(ear));
      }
      if (start + length_out > taps) {
        throw_data("align: trim window past IR end at position " +
                   std::to_string(p) + " ear " + std::to_string(ear));
      }
      std::vector<float>& dst = ear == 0 ? out.impulse_responses[p].left
                                         : out.impulse_responses[p].right;
      dst.assign(src.begin() + start, src.begin() + start + length_out);
    }
  }
  return out;
}

double itd_model(const SphericalDirection& dir, double head_radius_m,
                 double speed_m_s) {
  const double s =
      std::sin(dir.azimuth_rad) * std::cos(dir.elevation_rad);
  const double theta_i = std::asin(std::clamp(s, -1.0, 1.0));
  return head_radius_m / speed_m_s * (theta_i + std::sin(theta_i));
}

StereoIr apply_itd(std::span<const float> left, std::span<const float> right,
                   double itd_s, int sample_rate_hz) {
  if (left.size() != right.size()) {
    throw_data("apply_itd: ear length mismatch");
  }
  const std::size_t taps = left.size();
  const long shift =
      std::lround(std::abs(itd_s) * static_cast<double>(sample_rate_hz));
  if (shift >= static_cast<long>(taps)) {
    throw_data("apply_itd: delay exceeds IR length");
  }
  StereoIr out;
  out.left.assign(left.begin(), left.end());
  out.right.assign(right.begin(), right.end());
  std::vector<float>& lagging = itd_s >= 0.0 ? out.right : out.left;
  if (shift > 0) {
    lagging.insert(lagging.begin(), static_cast<std::size_t>(shift), 0.0f);
    lagging.resize(taps);
  }
  return out;
}

}  // namespace hrtfup::itd
