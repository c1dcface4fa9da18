#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hrtfup/types.hpp"

namespace hrtfup::projection {

inline constexpr int kNumPanels = 5;
inline constexpr int kTopPanel = 5;

// Tangent-plane coordinates on one cube face. For in-face points
// |x|, |y| <= radius * pi/4.
struct PanelCoordinate {
  int panel = 1;  // 1..4 equatorial, 5 top
  double x = 0.0;
  double y = 0.0;
};

// Panel owning a direction. Panel 1 is centered on azimuth 0; seams sit at
// odd multiples of pi/4. The top face claims points with |x|,|y| <= R*pi/4
// (ties included); directions on the removed bottom face are rejected.
int panel_of(const SphericalDirection& dir);

PanelCoordinate forward_project(const SphericalDirection& dir);

SphericalDirection inverse_project(const PanelCoordinate& pc, double radius_m);

// Analytic extension of the inverse without the in-face bounds check. Used to
// locate the directions of padding cells that lie beyond a face edge.
SphericalDirection inverse_project_unchecked(const PanelCoordinate& pc,
                                             double radius_m);

class CubedSphereGrid {
 public:
  CubedSphereGrid() = default;
  CubedSphereGrid(int width, double radius_m,
                  std::vector<SphericalDirection> cells);

  int width() const { return width_; }
  double radius_m() const { return radius_m_; }
  int cell_count() const { return kNumPanels * width_ * width_; }

  // Cells are stored panel-major, then i (x index), then j (y index).
  std::size_t flat_index(int panel, int i, int j) const;
  const SphericalDirection& at(int panel, int i, int j) const;
  const std::vector<SphericalDirection>& cell_directions() const {
    return cells_;
  }

  // Center angle of cell index k along one axis: -pi/4 + (k+0.5)*(pi/2)/W.
  double cell_angle(int k) const;

 private:
  int width_ = 0;
  double radius_m_ = 1.0;
  std::vector<SphericalDirection> cells_;
};

// W must be a power of two >= 2 so every factor r = 2^k divides it.
CubedSphereGrid make_grid(int width, double radius_m = 1.0);

// CSV rows: panel,i,j,azimuth_rad,elevation_rad
void export_grid_csv(const CubedSphereGrid& grid, std::ostream& out);

}  // namespace hrtfup::projection
