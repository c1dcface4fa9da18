#include "hrtfup/cubesphere.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "hrtfup/error.hpp"

namespace hrtfup::cubesphere {

namespace {
constexpr double kQuarterPi = std::numbers::pi / 4.0;
}

PanelTensor PanelTensor::zeros(int channels, int width, int height) {
  PanelTensor t;
  t.channels = channels;
  t.width = width;
  t.height = height;
  t.values.assign(static_cast<std::size_t>(channels) *
                      projection::kNumPanels * width * height,
                  0.0);
  return t;
}

void PanelTensor::validate() const {
  if (channels <= 0 || width <= 0 || height <= 0) {
    throw_data("tensor: non-positive dimensions");
  }
  if (width != height) throw_data("tensor: W != H");
  if (values.size() != static_cast<std::size_t>(channels) *
                           projection::kNumPanels * width * height) {
    throw_data("tensor: payload size mismatch");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw_data("tensor: negative or non-finite value");
    }
  }
}

const AdjacencyTable& adjacency() {
  // Derived from the projection geometry (derive_adjacency agrees; the unit
  // tests assert it). Edge order: left, right, bottom, top.
  static const AdjacencyTable table = [] {
    AdjacencyTable t{};
    auto link = [](int panel, EdgeSide edge, bool reversed) {
      return EdgeLink{false, panel, edge, reversed};
    };
    const EdgeLink rep{true, 0, EdgeSide::left, false};
    // Panels 1..4 ring around the equator; tops meet panel 5.
    t[0] = {link(4, EdgeSide::right, false), link(2, EdgeSide::left, false),
            rep, link(5, EdgeSide::bottom, false)};
    t[1] = {link(1, EdgeSide::right, false), link(3, EdgeSide::left, false),
            rep, link(5, EdgeSide::right, false)};
    t[2] = {link(2, EdgeSide::right, false), link(4, EdgeSide::left, false),
            rep, link(5, EdgeSide::top, true)};
    t[3] = {link(3, EdgeSide::right, false), link(1, EdgeSide::left, false),
            rep, link(5, EdgeSide::left, true)};
    t[4] = {link(4, EdgeSide::top, true), link(2, EdgeSide::top, false),
            link(1, EdgeSide::top, false), link(3, EdgeSide::top, true)};
    return t;
  }();
  return table;
}

namespace {

// Source cell at inward depth d (1-based) along index k from a given edge.
void edge_cell(EdgeSide edge, int width, int depth, int along, int* i,
               int* j) {
  switch (edge) {
    case EdgeSide::left:
      *i = depth - 1;
      *j = along;
      break;
    case EdgeSide::right:
      *i = width - depth;
      *j = along;
      break;
    case EdgeSide::bottom:
      *i = along;
      *j = depth - 1;
      break;
    case EdgeSide::top:
      *i = along;
      *j = width - depth;
      break;
  }
}

std::int32_t source_flat(int panel, int i, int j, int width) {
  return static_cast<std::int32_t>(((panel - 1) * width + i) * width + j);
}

}  // namespace

AdjacencyTable derive_adjacency(int probe_width) {
  const int w = probe_width;
  const projection::CubedSphereGrid grid = projection::make_grid(w);

  auto nearest_cell = [&](const SphericalDirection& dir, int* panel, int* i,
                          int* j) {
    double best = std::numeric_limits<double>::max();
    for (int n = 1; n <= projection::kNumPanels; ++n) {
      for (int a = 0; a < w; ++a) {
        for (int b = 0; b < w; ++b) {
          const double d = angular_distance(dir, grid.at(n, a, b));
          if (d < best) {
            best = d;
            *panel = n;
            *i = a;
            *j = b;
          }
        }
      }
    }
  };

  const double step = (std::numbers::pi / 2.0) / w;
  AdjacencyTable table{};
  for (int panel = 1; panel <= projection::kNumPanels; ++panel) {
    for (int e = 0; e < 4; ++e) {
      const EdgeSide edge = static_cast<EdgeSide>(e);
      // Two depth-1 probes along the edge to pin both neighbor and
      // orientation.
      int src_panel[2], src_i[2], src_j[2];
      for (int probe = 0; probe < 2; ++probe) {
        const int along = probe + 1;
        int pi = 0, pj = 0;
        edge_cell(edge, w, 0, along, &pi, &pj);  // depth 0 => one beyond
        const double xi = -kQuarterPi + (pi + 0.5) * step;
        const double eta = -kQuarterPi + (pj + 0.5) * step;
        const SphericalDirection dir = projection::inverse_project_unchecked(
            projection::PanelCoordinate{panel, xi, eta}, 1.0);
        nearest_cell(dir, &src_panel[probe], &src_i[probe], &src_j[probe]);
      }

      EdgeLink link;
      if (src_panel[0] == panel && src_panel[1] == panel) {
        link.replicate = true;
      } else {
        link.replicate = false;
        link.neighbor_panel = src_panel[0];
        // Depth-1 sources sit on the neighbor's first ring; identify which
        // edge of the neighbor that ring belongs to by seeing which
        // coordinate pins to the boundary for both probes.
        if (src_i[0] == 0 && src_i[1] == 0) {
          link.neighbor_edge = EdgeSide::left;
        } else if (src_i[0] == w - 1 && src_i[1] == w - 1) {
          link.neighbor_edge = EdgeSide::right;
        } else if (src_j[0] == 0 && src_j[1] == 0) {
          link.neighbor_edge = EdgeSide::bottom;
        } else if (src_j[0] == w - 1 && src_j[1] == w - 1) {
          link.neighbor_edge = EdgeSide::top;
        } else {
          throw_numeric("derive_adjacency: probes disagree on neighbor edge");
        }
        const bool along_is_j = link.neighbor_edge == EdgeSide::left ||
                                link.neighbor_edge == EdgeSide::right;
        const int a0 = along_is_j ? src_j[0] : src_i[0];
        const int a1 = along_is_j ? src_j[1] : src_i[1];
        if (a1 - a0 == 1) {
          link.reversed = false;
        } else if (a1 - a0 == -1) {
          link.reversed = true;
        } else {
          throw_numeric("derive_adjacency: probes disagree on orientation");
        }
        if ((link.reversed ? w - 1 - 1 : 1) != a0) {
          throw_numeric("derive_adjacency: along-index offset mismatch");
        }
      }
      table[panel - 1][e] = link;
    }
  }
  return table;
}

std::vector<std::int32_t> make_pad_map(int width, int pad) {
  if (pad < 0) throw_invalid("pad: negative padding");
  if (pad >= width) throw_invalid("pad: requires p < W");
  const int w = width;
  const int wp = w + 2 * pad;
  const AdjacencyTable& table = adjacency();

  std::vector<std::int32_t> map(
      static_cast<std::size_t>(projection::kNumPanels) * wp * wp);

  auto resolve_edge = [&](int panel, EdgeSide edge, int depth,
                          int along) -> std::int32_t {
    const EdgeLink& link = table[panel - 1][static_cast<int>(edge)];
    if (link.replicate) {
      int i = 0, j = 0;
      edge_cell(edge, w, 1, along, &i, &j);  // nearest in-panel row
      return source_flat(panel, i, j, w);
    }
    const int k = link.reversed ? w - 1 - along : along;
    int i = 0, j = 0;
    edge_cell(link.neighbor_edge, w, depth, k, &i, &j);
    return source_flat(link.neighbor_panel, i, j, w);
  };

  for (int panel = 1; panel <= projection::kNumPanels; ++panel) {
    for (int ii = 0; ii < wp; ++ii) {
      for (int jj = 0; jj < wp; ++jj) {
        const int i = ii - pad;
        const int j = jj - pad;
        const bool x_in = i >= 0 && i < w;
        const bool y_in = j >= 0 && j < w;
        std::int32_t src;
        if (x_in && y_in) {
          src = source_flat(panel, i, j, w);
        } else if (x_in) {
          const EdgeSide edge = j < 0 ? EdgeSide::bottom : EdgeSide::top;
          const int depth = j < 0 ? -j : j - w + 1;
          src = resolve_edge(panel, edge, depth, i);
        } else if (y_in) {
          const EdgeSide edge = i < 0 ? EdgeSide::left : EdgeSide::right;
          const int depth = i < 0 ? -i : i - w + 1;
          src = resolve_edge(panel, edge, depth, j);
        } else if (panel != projection::kTopPanel && j >= w) {
          // Corner region that touches the top panel: take the nearest
          // top-panel edge cell via the panel's top edge link.
          const int depth = j - w + 1;
          const int along = std::clamp(i, 0, w - 1);
          src = resolve_edge(panel, EdgeSide::top, depth, along);
        } else {
          // Remaining corners replicate the nearest in-face cell.
          src = source_flat(panel, std::clamp(i, 0, w - 1),
                            std::clamp(j, 0, w - 1), w);
        }
        map[(static_cast<std::size_t>(panel - 1) * wp + ii) * wp + jj] = src;
      }
    }
  }
  return map;
}

PanelTensor pad(const PanelTensor& t, int p) {
  if (t.width != t.height) throw_data("pad: W != H");
  if (p == 0) return t;
  const std::vector<std::int32_t> map = make_pad_map(t.width, p);
  const int wp = t.width + 2 * p;
  PanelTensor out;
  out.channels = t.channels;
  out.width = wp;
  out.height = wp;
  out.values.resize(static_cast<std::size_t>(t.channels) *
                    projection::kNumPanels * wp * wp);
  const std::size_t plane_in =
      static_cast<std::size_t>(projection::kNumPanels) * t.width * t.width;
  const std::size_t plane_out = map.size();
  for (int c = 0; c < t.channels; ++c) {
    const double* in = t.values.data() + c * plane_in;
    double* dst = out.values.data() + c * plane_out;
    for (std::size_t k = 0; k < plane_out; ++k) {
      dst[k] = in[map[k]];
    }
  }
  return out;
}

PanelTensor downsample(const PanelTensor& t, int r, int offset) {
  if (t.width != t.height) throw_data("downsample: W != H");
  if (r <= 0 || (r & (r - 1)) != 0) {
    throw_invalid("downsample: factor must be a power of two");
  }
  if (t.width % r != 0) {
    throw_invalid("downsample: factor does not divide W");
  }
  if (offset == kCenteredOffset) offset = (r - 1) / 2;
  if (offset < 0 || offset >= r) {
    throw_invalid("downsample: offset must be in [0, r)");
  }
  if (r == 1) return t;
  const int wo = t.width / r;
  PanelTensor out = PanelTensor::zeros(t.channels, wo, wo);
  for (int c = 0; c < t.channels; ++c) {
    for (int panel = 1; panel <= projection::kNumPanels; ++panel) {
      for (int i = 0; i < wo; ++i) {
        for (int j = 0; j < wo; ++j) {
          out.at(c, panel, i, j) =
              t.at(c, panel, r * i + offset, r * j + offset);
        }
      }
    }
  }
  return out;
}

namespace {
bool same_direction(const SphericalDirection& a, const SphericalDirection& b) {
  return angular_distance(a, b) <= 1e-9 &&
         std::abs(a.radius_m - b.radius_m) <= 1e-9 * std::abs(b.radius_m);
}
}  // namespace

PanelTensor set_from_grid(const spectra::MagnitudeHrtf& mags,
                          const projection::CubedSphereGrid& grid) {
  mags.validate();
  const int w = grid.width();
  if (static_cast<int>(mags.size()) != grid.cell_count()) {
    throw_data("set_from_grid: position count does not match grid");
  }
  for (int k = 0; k < grid.cell_count(); ++k) {
    if (!same_direction(mags.positions[k], grid.cell_directions()[k])) {
      throw_data("set_from_grid: positions not in grid order (index " +
                 std::to_string(k) + ")");
    }
  }
  const int bins = mags.bins_per_ear();
  PanelTensor t = PanelTensor::zeros(2 * bins, w, w);
  for (int panel = 1; panel <= projection::kNumPanels; ++panel) {
    for (int i = 0; i < w; ++i) {
      for (int j = 0; j < w; ++j) {
        const std::size_t pos = grid.flat_index(panel, i, j);
        for (int ear = 0; ear < 2; ++ear) {
          for (int b = 0; b < bins; ++b) {
            t.at(ear * bins + b, panel, i, j) = mags.at(pos, ear, b);
          }
        }
      }
    }
  }
  return t;
}

spectra::MagnitudeHrtf mag_from_tensor(const PanelTensor& t,
                                       const projection::CubedSphereGrid& grid,
                                       int sample_rate_hz,
                                       const std::string& subject_id) {
  t.validate();
  if (t.width != grid.width()) {
    throw_data("mag_from_tensor: tensor width does not match grid");
  }
  if (t.channels % 2 != 0) throw_data("mag_from_tensor: odd channel count");
  const int bins = t.channels / 2;
  spectra::MagnitudeHrtf mags;
  mags.subject_id = subject_id;
  mags.sample_rate_hz = sample_rate_hz;
  mags.nfft = t.channels;
  mags.positions = grid.cell_directions();
  mags.magnitudes.resize(mags.positions.size() * 2 * bins);
  for (int panel = 1; panel <= projection::kNumPanels; ++panel) {
    for (int i = 0; i < t.width; ++i) {
      for (int j = 0; j < t.width; ++j) {
        const std::size_t pos = grid.flat_index(panel, i, j);
        for (int ear = 0; ear < 2; ++ear) {
          for (int b = 0; b < bins; ++b) {
            mags.at(pos, ear, b) = t.at(ear * bins + b, panel, i, j);
          }
        }
      }
    }
  }
  return mags;
}

void save_tensor(const PanelTensor& t, const std::filesystem::path& path) {
  t.validate();
  nlohmann::ordered_json j;
  j["magic"] = "CSTEN1";
  j["channels"] = t.channels;
  j["width"] = t.width;
  j["height"] = t.height;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("tensor: cannot open for writing: " + path.string());
  out << j.dump() << '\n';
  std::vector<float> payload(t.values.begin(), t.values.end());
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!out) throw_data("tensor: write failed: " + path.string());
}

PanelTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("tensor: cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw_data("tensor: missing header");
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object() ||
      j.value("magic", "") != std::string("CSTEN1")) {
    throw_data("tensor: malformed header: " + path.string());
  }
  PanelTensor t;
  try {
    t.channels = j.at("channels").get<int>();
    t.width = j.at("width").get<int>();
    t.height = j.at("height").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw_data("tensor: malformed header (" + std::string(e.what()) + ")");
  }
  if (t.channels <= 0 || t.width <= 0 || t.height <= 0) {
    throw_data("tensor: non-positive dimensions");
  }
  const std::size_t count = static_cast<std::size_t>(t.channels) *
                            projection::kNumPanels * t.width * t.height;
  std::vector<float> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(float))) {
    throw_data("tensor: payload size mismatch: " + path.string());
  }
  t.values.assign(payload.begin(), payload.end());
  t.validate();
  return t;
}

}  // namespace hrtfup::cubesphere
