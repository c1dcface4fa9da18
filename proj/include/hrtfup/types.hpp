#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "hrtfup/error.hpp"

namespace hrtfup {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wraps an angle into [0, 2pi).
inline double wrap_azimuth(double az) {
  double a = std::fmod(az, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

// Wraps an angle into [-pi, pi).
inline double wrap_pi(double a) {
  double w = std::fmod(a + std::numbers::pi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w - std::numbers::pi;
}

struct SphericalDirection {
  double azimuth_rad = 0.0;    // [0, 2pi)
  double elevation_rad = 0.0;  // [-pi/2, pi/2]
  double radius_m = 1.0;       // > 0
};

// Validates the invariants and wraps azimuth into range.
SphericalDirection make_direction(double azimuth_rad, double elevation_rad,
                                  double radius_m = 1.0);

// Great-circle distance in radians between two directions (radius ignored).
// Uses the 2*asin(chord/2) form, which stays accurate near zero.
double angular_distance(const SphericalDirection& a,
                        const SphericalDirection& b);

// Unit vector (x, y, z) of a direction; x toward azimuth 0, z up.
void to_unit_vector(const SphericalDirection& d, double out[3]);

struct StereoIr {
  std::vector<float> left;
  std::vector<float> right;
};

struct HrirSet {
  std::string subject_id;
  int sample_rate_hz = 48000;
  std::vector<SphericalDirection> positions;
  std::vector<StereoIr> impulse_responses;  // one per position

  int taps() const {
    return impulse_responses.empty()
               ? 0
               : static_cast<int>(impulse_responses.front().left.size());
  }

  std::size_t size() const { return positions.size(); }

  // Throws Error(data) if any invariant is broken: non-empty duplicate-free
  // positions, all IRs the same length >= 8, both ears present.
  void validate() const;
};

}  // namespace hrtfup
