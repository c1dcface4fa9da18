#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hrtfup/projection.hpp"
#include "hrtfup/spectra.hpp"
#include "hrtfup/types.hpp"

namespace hrtfup::cubesphere {

// Dense channels x 5 panels x W x H value block. Values are stored
// [c][panel][i][j] with j fastest; i indexes the x (xi) axis and j the
// y (eta) axis of the gnomonic face.
struct PanelTensor {
  int channels = 0;
  int width = 0;
  int height = 0;
  std::vector<double> values;

  static PanelTensor zeros(int channels, int width, int height);

  std::size_t plane_size() const {
    return static_cast<std::size_t>(width) * height;
  }
  std::size_t panel_stride() const { return plane_size(); }
  std::size_t channel_stride() const {
    return static_cast<std::size_t>(projection::kNumPanels) * plane_size();
  }
  std::size_t flat(int c, int panel, int i, int j) const {
    return ((static_cast<std::size_t>(c) * projection::kNumPanels +
             (panel - 1)) *
                width +
            i) *
               height +
           j;
  }
  double& at(int c, int panel, int i, int j) {
    return values[flat(c, panel, i, j)];
  }
  double at(int c, int panel, int i, int j) const {
    return values[flat(c, panel, i, j)];
  }

  void validate() const;  // finite, non-negative, W == H, size consistent
};

enum class EdgeSide : int { left = 0, right = 1, bottom = 2, top = 3 };

struct EdgeLink {
  bool replicate = false;     // equatorial bottom edges
  int neighbor_panel = 0;     // 1..5 when !replicate
  EdgeSide neighbor_edge = EdgeSide::left;
  bool reversed = false;      // along-edge index orientation
};

// links[panel-1][edge]
using AdjacencyTable = std::array<std::array<EdgeLink, 4>, 5>;

// The frozen table used by pad(); panel 1 faces azimuth 0, panel 5 is the
// top face.
const AdjacencyTable& adjacency();

// Re-derives the table from the projection geometry by probing pad-cell
// directions against the nearest grid cell. Test oracle for adjacency().
AdjacencyTable derive_adjacency(int probe_width = 8);

// For every cell of the (W+2p)^2 padded panels, the flat source index into
// the unpadded [panel][i][j] layout. Values are pure copies.
std::vector<std::int32_t> make_pad_map(int width, int pad);

// Adjacency padding: border cells copy the matching rows of the adjacent
// panel; equatorial bottom edges replicate the nearest in-panel row; corners
// touching the top panel take the nearest top-panel edge cell, other corners
// replicate. Requires p < W.
PanelTensor pad(const PanelTensor& t, int p);

inline constexpr int kCenteredOffset = -1;

// Spatial selection of every r-th cell. The default offset floor((r-1)/2)
// keeps centered representatives; pass an explicit offset in [0, r) to
// override (offset 0 makes downsampling compose multiplicatively).
PanelTensor downsample(const PanelTensor& t, int r,
                       int offset = kCenteredOffset);

// Channel layout: 0..bins-1 left ear, bins..2*bins-1 right ear.
PanelTensor set_from_grid(const spectra::MagnitudeHrtf& mags,
                          const projection::CubedSphereGrid& grid);

spectra::MagnitudeHrtf mag_from_tensor(const PanelTensor& t,
                                       const projection::CubedSphereGrid& grid,
                                       int sample_rate_hz,
                                       const std::string& subject_id);

void save_tensor(const PanelTensor& t, const std::filesystem::path& path);
PanelTensor load_tensor(const std::filesystem::path& path);

}  // namespace hrtfup::cubesphere
