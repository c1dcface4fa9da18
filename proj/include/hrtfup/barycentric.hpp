#pragma once

#include <array>
#include <span>
#include <vector>

#include "hrtfup/projection.hpp"
#include "hrtfup/types.hpp"

namespace hrtfup::barycentric {

struct TriangleWeights {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::array<int, 3> vertex_indices{-1, -1, -1};
};

struct ExcessResult {
  double excess = 0.0;  // radians, >= 0
  bool degenerate = false;
};

// L'Huilier's theorem from the three side arc lengths. Sides must each be
// < pi and satisfy the triangle inequality; a zero-area triangle reports
// excess 0 with the degenerate flag set.
ExcessResult spherical_excess(double a, double b, double c);

// Area-ratio weights treating (elevation, azimuth) as plane coordinates.
// Retained as a cross-check for the spherical variant.
TriangleWeights planar_weights(const SphericalDirection& target,
                               const SphericalDirection& v1,
                               const SphericalDirection& v2,
                               const SphericalDirection& v3);

// Spherical-excess area-ratio weights: alpha = E(PiP2P3)/E(P1P2P3),
// beta = E(P1PiP3)/E(P1P2P3), gamma = 1 - alpha - beta.
TriangleWeights spherical_weights(const SphericalDirection& target,
                                  const SphericalDirection& v1,
                                  const SphericalDirection& v2,
                                  const SphericalDirection& v3);

struct TriangleSearchResult {
  TriangleWeights weights;
  bool enclosing = false;
};

// Searches triples among the `neighbor_budget` nearest measurement points,
// ordered by total great-circle distance to the target, for the first
// enclosing spherical triangle (the three sub-areas tile the full one within
// 1e-9). Falls back to the three nearest points, flagged non-enclosing.
TriangleSearchResult find_enclosing_triangle(
    const SphericalDirection& target,
    std::span<const SphericalDirection> positions, int neighbor_budget = 12);

StereoIr interpolate_hrir(const TriangleWeights& w, const StereoIr& ir1,
                          const StereoIr& ir2, const StereoIr& ir3);

// One interpolated stereo IR per grid direction, computed on the sphere.
// Input must already be ITD-aligned. `planar` switches to the planar weight
// formulas for A/B comparisons.
HrirSet barycentric_upsample(const HrirSet& set,
                             const projection::CubedSphereGrid& grid,
                             bool planar = false);

}  // namespace hrtfup::barycentric
