#include "hrtfup/projection.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "hrtfup/error.hpp"

namespace hrtfup::projection {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarterPi = kPi / 4.0;

// Face bound check shared by panel_of and inverse_project.
bool within_face(double x, double y, double radius, double tol) {
  const double bound = radius * kQuarterPi + tol;
  return std::abs(x) <= bound && std::abs(y) <= bound;
}

}  // namespace

int panel_of(const SphericalDirection& dir) {
  const double sin_el = std::sin(dir.elevation_rad);
  const double cos_el = std::cos(dir.elevation_rad);
  const double horiz = cos_el * std::max(std::abs(std::cos(dir.azimuth_rad)),
                                         std::abs(std::sin(dir.azimuth_rad)));
  // Top face claims boundary ties; the bottom face boundary still belongs to
  // the equatorial band.
  if (sin_el >= horiz) return kTopPanel;
  if (-sin_el > horiz) {
    throw_data("direction below cube equator band (bottom panel removed)");
  }
  const double shifted = wrap_azimuth(dir.azimuth_rad + kQuarterPi);
  int n = 1 + static_cast<int>(std::floor(shifted / (kPi / 2.0)));
  if (n > 4) n = 4;
  return n;
}

PanelCoordinate forward_project(const SphericalDirection& dir) {
  const int n = panel_of(dir);
  const double r = dir.radius_m;
  PanelCoordinate pc;
  pc.panel = n;
  if (n == kTopPanel) {
    // sin(el) > 0 whenever panel_of returns the top panel.
    const double cot_el =
        std::cos(dir.elevation_rad) / std::sin(dir.elevation_rad);
    pc.x = r * std::atan(std::sin(dir.azimuth_rad) * cot_el);
    pc.y = r * std::atan(-std::cos(dir.azimuth_rad) * cot_el);
  } else {
    const double delta = wrap_pi(dir.azimuth_rad - (n - 1) * kPi / 2.0);
    pc.x = r * delta;
    pc.y = r * std::atan(std::tan(dir.elevation_rad) / std::cos(delta));
  }
  return pc;
}

SphericalDirection inverse_project_unchecked(const PanelCoordinate& pc,
                                             double radius_m) {
  if (radius_m <= 0.0) throw_invalid("inverse_project: radius must be > 0");
  double az;
  double el;
  if (pc.panel == kTopPanel) {
    const double tx = std::tan(pc.x / radius_m);
    const double ty = std::tan(pc.y / radius_m);
    const double h = std::hypot(tx, ty);
    az = (h == 0.0) ? 0.0 : std::atan2(tx, -ty);
    el = std::atan2(1.0, h);
  } else {
    const double delta = pc.x / radius_m;
    az = (pc.panel - 1) * kPi / 2.0 + delta;
    el = std::atan(std::tan(pc.y / radius_m) * std::cos(delta));
  }
  return make_direction(az, el, radius_m);
}

SphericalDirection inverse_project(const PanelCoordinate& pc,
                                   double radius_m) {
  if (pc.panel < 1 || pc.panel > kNumPanels) {
    throw_invalid("inverse_project: panel must be in 1..5");
  }
  if (!within_face(pc.x, pc.y, radius_m, 1e-12 * radius_m)) {
    throw_invalid("inverse_project: coordinates outside face");
  }
  return inverse_project_unchecked(pc, radius_m);
}

CubedSphereGrid::CubedSphereGrid(int width, double radius_m,
                                 std::vector<SphericalDirection> cells)
    : width_(width), radius_m_(radius_m), cells_(std::move(cells)) {}

std::size_t CubedSphereGrid::flat_index(int panel, int i, int j) const {
  return (static_cast<std::size_t>(panel - 1) * width_ + i) * width_ + j;
}

const SphericalDirection& CubedSphereGrid::at(int panel, int i, int j) const {
  return cells_[flat_index(panel, i, j)];
}

double CubedSphereGrid::cell_angle(int k) const {
  return -kQuarterPi + (k + 0.5) * (kPi / 2.0) / width_;
}

CubedSphereGrid make_grid(int width, double radius_m) {
  if (width < 2 || (width & (width - 1)) != 0) {
    throw_invalid("make_grid: width must be a power of two >= 2");
  }
  if (radius_m <= 0.0) throw_invalid("make_grid: radius must be > 0");
  std::vector<SphericalDirection> cells;
  cells.reserve(static_cast<std::size_t>(kNumPanels) * width * width);
  for (int panel = 1; panel <= kNumPanels; ++panel) {
    for (int i = 0; i < width; ++i) {
      const double xi = -kQuarterPi + (i + 0.5) * (kPi / 2.0) / width;
      for (int j = 0; j < width; ++j) {
        const double eta = -kQuarterPi + (j + 0.5) * (kPi / 2.0) / width;
        cells.push_back(inverse_project(
            PanelCoordinate{panel, radius_m * xi, radius_m * eta}, radius_m));
      }
    }
  }
  return CubedSphereGrid(width, radius_m, std::move(cells));
}

void export_grid_csv(const CubedSphereGrid& grid, std::ostream& out) {
  out << "panel,i,j,azimuth_rad,elevation_rad\n";
  char buf[96];
  for (int panel = 1; panel <= kNumPanels; ++panel) {
    for (int i = 0; i < grid.width(); ++i) {
      for (int j = 0; j < grid.width(); ++j) {
        const SphericalDirection& d = grid.at(panel, i, j);
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g\n", panel, i, j,
                      d.azimuth_rad, d.elevation_rad);
        out << buf;
      }
    }
  }
}

}  // namespace hrtfup::projection
