#include "hrtfup/barycentric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hrtfup/error.hpp"

namespace hrtfup::barycentric {

namespace {

constexpr double kDegenerateExcess = 1e-15;
constexpr double kEnclosureTol = 1e-9;

// Excess of the triangle spanned by three directions. Rounding-level
// triangle-inequality violations and collapsed triangles (target on a vertex
// or an edge) count as zero area; sides touching pi report unusable.
bool excess_of(const SphericalDirection& a, const SphericalDirection& b,
               const SphericalDirection& c, double* out) {
  const double ab = angular_distance(a, b);
  const double bc = angular_distance(b, c);
  const double ca = angular_distance(c, a);
  if (ab >= std::numbers::pi - 1e-12 || bc >= std::numbers::pi - 1e-12 ||
      ca >= std::numbers::pi - 1e-12) {
    return false;
  }
  const double s = 0.5 * (ab + bc + ca);
  const double t = std::tan(0.5 * s) * std::tan(0.5 * (s - bc)) *
                   std::tan(0.5 * (s - ca)) * std::tan(0.5 * (s - ab));
  *out = t <= 0.0 ? 0.0 : 4.0 * std::atan(std::sqrt(t));
  return true;
}

double sub_excess(const SphericalDirection& a, const SphericalDirection& b,
                  const SphericalDirection& c) {
  double e = 0.0;
  if (!excess_of(a, b, c, &e)) {
    throw_numeric("spherical_weights: near-antipodal vertices");
  }
  return e;
}

}  // namespace

ExcessResult spherical_excess(double a, double b, double c) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0) ||
      !(a < std::numbers::pi && b < std::numbers::pi &&
        c < std::numbers::pi)) {
    throw_invalid("spherical_excess: sides must be in [0, pi)");
  }
  if (a > b + c + 1e-15 || b > a + c + 1e-15 || c > a + b + 1e-15) {
    throw_invalid("spherical_excess: triangle inequality violated");
  }
  const double s = 0.5 * (a + b + c);
  const double t = std::tan(0.5 * s) * std::tan(0.5 * (s - a)) *
                   std::tan(0.5 * (s - b)) * std::tan(0.5 * (s - c));
  if (t <= 0.0) {
    return {0.0, true};
  }
  return {4.0 * std::atan(std::sqrt(t)), false};
}

TriangleWeights planar_weights(const SphericalDirection& target,
                               const SphericalDirection& v1,
                               const SphericalDirection& v2,
                               const SphericalDirection& v3) {
  const double p1 = v1.elevation_rad, t1 = v1.azimuth_rad;
  const double p2 = v2.elevation_rad, t2 = v2.azimuth_rad;
  const double p3 = v3.elevation_rad, t3 = v3.azimuth_rad;
  const double pi_ = target.elevation_rad, ti = target.azimuth_rad;
  const double denom = (p2 - p3) * (t1 - t3) + (t3 - t2) * (p1 - p3);
  if (std::abs(denom) < 1e-15) {
    throw_numeric("planar_weights: collinear vertices");
  }
  TriangleWeights w;
  w.alpha = ((p2 - p3) * (ti - t3) + (t3 - t2) * (pi_ - p3)) / denom;
  w.beta = ((p3 - p1) * (ti - t3) + (t1 - t3) * (pi_ - p3)) / denom;
  w.gamma = 1.0 - w.alpha - w.beta;
  return w;
}

TriangleWeights spherical_weights(const SphericalDirection& target,
                                  const SphericalDirection& v1,
                                  const SphericalDirection& v2,
                                  const SphericalDirection& v3) {
  const double full = sub_excess(v1, v2, v3);
  if (full <= kDegenerateExcess) {
    throw_numeric("spherical_weights: degenerate enclosing triangle");
  }
  TriangleWeights w;
  w.alpha = sub_excess(target, v2, v3) / full;
  w.beta = sub_excess(v1, target, v3) / full;
  w.gamma = 1.0 - w.alpha - w.beta;
  return w;
}

TriangleSearchResult find_enclosing_triangle(
    const SphericalDirection& target,
    std::span<const SphericalDirection> positions, int neighbor_budget) {
  const std::size_t n = positions.size();
  if (n < 3) throw_data("triangle search: fewer than 3 positions");

  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = angular_distance(target, positions[i]);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist[a] < dist[b]; });

  const int k = std::min<std::size_t>(std::max(neighbor_budget, 3), n);

  struct Triple {
    int a, b, c;
    double total;
  };
  std::vector<Triple> triples;
  triples.reserve(k * (k - 1) * (k - 2) / 6);
  for (int x = 0; x < k; ++x) {
    for (int y = x + 1; y < k; ++y) {
      for (int z = y + 1; z < k; ++z) {
        const int a = order[x], b = order[y], c = order[z];
        triples.push_back({a, b, c, dist[a] + dist[b] + dist[c]});
      }
    }
  }
  std::stable_sort(triples.begin(), triples.end(),
                   [](const Triple& u, const Triple& v) {
                     return u.total < v.total;
                   });

  for (const Triple& t : triples) {
    const SphericalDirection& v1 = positions[t.a];
    const SphericalDirection& v2 = positions[t.b];
    const SphericalDirection& v3 = positions[t.c];
    double full = 0.0, ea = 0.0, eb = 0.0, ec = 0.0;
    if (!excess_of(v1, v2, v3, &full) || full <= kDegenerateExcess) continue;
    if (!excess_of(target, v2, v3, &ea) || !excess_of(v1, target, v3, &eb) ||
        !excess_of(v1, v2, target, &ec)) {
      continue;
    }
    // The point is inside exactly when the three sub-areas tile the full one.
    if (ea + eb + ec <= full * (1.0 + kEnclosureTol)) {
      TriangleSearchResult res;
      res.enclosing = true;
      res.weights.alpha = ea / full;
      res.weights.beta = eb / full;
      res.weights.gamma = 1.0 - res.weights.alpha - res.weights.beta;
      res.weights.vertex_indices = {t.a, t.b, t.c};
      return res;
    }
  }

  // No enclosing triangle within budget: use the three nearest points.
  TriangleSearchResult res;
  res.enclosing = false;
  const int a = order[0], b = order[1], c = order[2];
  res.weights.vertex_indices = {a, b, c};
  if (dist[a] <= 1e-12) {
    res.weights.alpha = 1.0;
    res.weights.beta = 0.0;
    res.weights.gamma = 0.0;
    return res;
  }
  double full = 0.0, ea = 0.0, eb = 0.0;
  const bool usable =
      excess_of(positions[a], positions[b], positions[c], &full) &&
      full > kDegenerateExcess &&
      excess_of(target, positions[b], positions[c], &ea) &&
      excess_of(positions[a], target, positions[c], &eb);
  if (usable) {
    res.weights.alpha = ea / full;
    res.weights.beta = eb / full;
    res.weights.gamma = 1.0 - res.weights.alpha - res.weights.beta;
  } else {
    // Collinear nearest points: inverse-distance weights.
    const double wa = 1.0 / dist[a], wb = 1.0 / dist[b], wc = 1.0 / dist[c];
    const double sum = wa + wb + wc;
    res.weights.alpha = wa / sum;
    res.weights.beta = wb / sum;
    res.weights.gamma = 1.0 - res.weights.alpha - res.weights.beta;
  }
  return res;
}

StereoIr interpolate_hrir(const TriangleWeights& w, const StereoIr& ir1,
                          const StereoIr& ir2, const StereoIr& ir3) {
  const std::size_t taps = ir1.left.size();
  if (ir1.right.size() != taps || ir2.left.size() != taps ||
      ir2.right.size() != taps || ir3.left.size() != taps ||
      ir3.right.size() != taps) {
    throw_data("interpolate_hrir: IR length mismatch");
  }
  StereoIr out;
  out.left.resize(taps);
  out.right.resize(taps);
  for (std::size_t t = 0; t < taps; ++t) {
    out.left[t] = static_cast<float>(w.alpha * ir1.left[t] +
                                     w.beta * ir2.left[t] +
                                     w.gamma * ir3.left[t]);
    out.right[t] = static_cast<float>(w.alpha * ir1.right[t] +
                                      w.beta * ir2.right[t] +
                                      w.gamma * ir3.right[t]);
  }
  return out;
}

HrirSet barycentric_upsample(const HrirSet& set,
                             const projection::CubedSphereGrid& grid,
                             bool planar) {
  set.validate();
  HrirSet out;
  out.subject_id = set.subject_id;
  out.sample_rate_hz = set.sample_rate_hz;
  out.positions = grid.cell_directions();
  out.impulse_responses.reserve(out.positions.size());
  for (const SphericalDirection& target : out.positions) {
    TriangleSearchResult found =
        find_enclosing_triangle(target, set.positions);
    TriangleWeights w = found.weights;
    if (planar) {
      const auto [a, b, c] = w.vertex_indices;
      w = planar_weights(target, set.positions[a], set.positions[b],
                         set.positions[c]);
      w.vertex_indices = found.weights.vertex_indices;
    }
    const auto [a, b, c] = w.vertex_indices;
    out.impulse_responses.push_back(
        interpolate_hrir(w, set.impulse_responses[a], set.impulse_responses[b],
                         set.impulse_responses[c]));
  }
  return out;
}

}  // namespace hrtfup::barycentric
