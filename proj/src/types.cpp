#include "hrtfup/types.hpp"

#include <cmath>
#include <numbers>

namespace hrtfup {

SphericalDirection make_direction(double azimuth_rad, double elevation_rad,
                                  double radius_m) {
  if (!std::isfinite(azimuth_rad) || !std::isfinite(elevation_rad) ||
      !std::isfinite(radius_m)) {
    throw_data("direction: non-finite component");
  }
  if (std::abs(elevation_rad) > std::numbers::pi / 2 + 1e-12) {
    throw_data("direction: elevation outside [-pi/2, pi/2]");
  }
  if (radius_m <= 0.0) {
    throw_data("direction: radius must be positive");
  }
  SphericalDirection d;
  d.azimuth_rad = wrap_azimuth(azimuth_rad);
  d.elevation_rad =
      std::clamp(elevation_rad, -std::numbers::pi / 2, std::numbers::pi / 2);
  d.radius_m = radius_m;
  return d;
}

void to_unit_vector(const SphericalDirection& d, double out[3]) {
  const double ce = std::cos(d.elevation_rad);
  out[0] = ce * std::cos(d.azimuth_rad);
  out[1] = ce * std::sin(d.azimuth_rad);
  out[2] = std::sin(d.elevation_rad);
}

double angular_distance(const SphericalDirection& a,
                        const SphericalDirection& b) {
  double u[3], v[3];
  to_unit_vector(a, u);
  to_unit_vector(b, v);
  const double dx = u[0] - v[0];
  const double dy = u[1] - v[1];
  const double dz = u[2] - v[2];
  const double chord = std::sqrt(dx * dx + dy * dy + dz * dz);
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

void HrirSet::validate() const {
  if (positions.empty()) throw_data("hrir set: empty positions list");
  if (positions.size() != impulse_responses.size()) {
    throw_data("hrir set: positions/IR count mismatch");
  }
  const std::size_t taps = impulse_responses.front().left.size();
  if (taps < 8) throw_data("hrir set: IR length must be >= 8 taps");
  if (sample_rate_hz <= 0) throw_data("hrir set: non-positive sample rate");
  for (std::size_t i = 0; i < impulse_responses.size(); ++i) {
    const StereoIr& ir = impulse_responses[i];
    if (ir.left.size() != taps || ir.right.size() != taps) {
      throw_data("hrir set: IR length mismatch at position " +
                 std::to_string(i));
    }
  }
  for (const SphericalDirection& p : positions) {
    make_direction(p.azimuth_rad, p.elevation_rad, p.radius_m);
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (angular_distance(positions[i], positions[j]) <= 1e-9) {
        throw_data("hrir set: duplicate position (" + std::to_string(i) +
                   ", " + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace hrtfup
