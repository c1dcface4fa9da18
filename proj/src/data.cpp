#include "hrtfup/data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hrtfup/error.hpp"
#include "hrtfup/hrirset_io.hpp"
#include "hrtfup/itd.hpp"
#include "hrtfup/random.hpp"
#include "hrtfup/spectra.hpp"

namespace hrtfup::data {

HrirSet load_hrir_set(const std::filesystem::path& path) {
  std::vector<float> payload;
  io::ContainerHeader h = io::read_container(path, "HRIRSET1", payload);
  HrirSet set;
  set.subject_id = h.subject_id;
  set.sample_rate_hz = h.sample_rate_hz;
  set.positions = std::move(h.positions);
  set.impulse_responses.resize(h.num_positions);
  const std::size_t taps = static_cast<std::size_t>(h.taps);
  for (int p = 0; p < h.num_positions; ++p) {
    const float* base = payload.data() + static_cast<std::size_t>(p) * 2 * taps;
    set.impulse_responses[p].left.assign(base, base + taps);
    set.impulse_responses[p].right.assign(base + taps, base + 2 * taps);
  }
  set.validate();
  return set;
}

void save_hrir_set(const HrirSet& set, const std::filesystem::path& path) {
  set.validate();
  io::ContainerHeader h;
  h.magic = "HRIRSET1";
  h.subject_id = set.subject_id;
  h.sample_rate_hz = set.sample_rate_hz;
  h.num_positions = static_cast<int>(set.size());
  h.taps = set.taps();
  h.positions = set.positions;
  std::vector<float> payload;
  payload.reserve(set.size() * 2 * set.taps());
  for (const StereoIr& ir : set.impulse_responses) {
    payload.insert(payload.end(), ir.left.begin(), ir.left.end());
    payload.insert(payload.end(), ir.right.begin(), ir.right.end());
  }
  io::write_container(path, h, payload);
}

DatasetSplit split_subjects(std::vector<std::string> subject_ids,
                            double train_fraction, std::uint64_t seed) {
  if (subject_ids.size() < 2) {
    throw_data("split: fewer than 2 subjects");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw_invalid("split: train_fraction must be in (0, 1)");
  }
  Rng rng(seed);
  rng.shuffle(subject_ids);
  const std::size_t n = subject_ids.size();
  std::size_t n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  DatasetSplit split;
  split.train_subjects.assign(subject_ids.begin(),
                              subject_ids.begin() + n_train);
  split.validation_subjects.assign(subject_ids.begin() + n_train,
                                   subject_ids.end());
  return split;
}

namespace {

// Real low-order basis evaluated on the unit vector. The right ear mirrors
// y -> -y, which is the azimuth reflection theta -> 2pi - theta.
std::array<double, 9> angular_basis(double x, double y, double z) {
  return {1.0, x, y, z, x * y, y * z, x * z, x * x - y * y, 3.0 * z * z - 1.0};
}

double envelope(const std::array<double, 3>& c, double u) {
  return c[0] + c[1] * std::cos(std::numbers::pi * u) +
         c[2] * std::cos(2.0 * std::numbers::pi * u);
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

SynthProfile make_synth_profile(std::uint64_t seed) {
  Rng rng(seed);
  SynthProfile prof;
  // Family means give subjects shared structure; the seeded deviations are
  // what an upsampler has to recover.
  prof.tilt = {0.1 + 0.05 * rng.normal(), -0.45 + 0.1 * rng.normal(),
               0.10 * rng.normal()};
  const std::array<double, 9> mean = {0.0,  0.18, 0.35, 0.28, 0.10,
                                      0.08, 0.10, 0.12, 0.08};
  const std::array<double, 9> sdev = {0.0,  0.06, 0.10, 0.08, 0.05,
                                      0.04, 0.05, 0.05, 0.04};
  for (std::size_t k = 0; k < 9; ++k) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double scale = c == 0 ? 1.0 : 0.5;
      prof.angular[k][c] = scale * (mean[k] + sdev[k] * rng.normal());
    }
  }
  return prof;
}

double synth_log_magnitude(const SynthProfile& profile,
                           const SphericalDirection& dir, int ear, double u) {
  double v[3];
  to_unit_vector(dir, v);
  const double y = ear == 0 ? v[1] : -v[1];
  const std::array<double, 9> basis = angular_basis(v[0], y, v[2]);
  double logm = envelope(profile.tilt, u);
  for (std::size_t k = 1; k < 9; ++k) {
    logm += envelope(profile.angular[k], u) * basis[k];
  }
  return logm;
}

HrirSet synth_subject(std::uint64_t seed,
                      std::vector<SphericalDirection> positions,
                      int sample_rate_hz, int taps, std::string subject_id) {
  if (positions.empty()) throw_data("synth: empty positions list");
  if (taps < 8) throw_invalid("synth: taps must be >= 8");
  if (sample_rate_hz <= 0) throw_invalid("synth: invalid sample rate");
  for (SphericalDirection& p : positions) {
    p = make_direction(p.azimuth_rad, p.elevation_rad, p.radius_m);
  }

  const SynthProfile profile = make_synth_profile(seed);
  const int nfft = next_pow2(std::max(2 * taps, 16));
  const int bins = nfft / 2;

  const double max_half_delay =
      0.0875 / 343.0 * (std::numbers::pi / 2.0 + 1.0) / 2.0 *
      static_cast<double>(sample_rate_hz);
  const int pre_roll = std::min(
      4 + static_cast<int>(std::ceil(max_half_delay)), taps / 2);

  HrirSet set;
  set.subject_id =
      subject_id.empty() ? "synth-" + std::to_string(seed) : subject_id;
  set.sample_rate_hz = sample_rate_hz;
  set.positions = positions;
  set.impulse_responses.resize(positions.size());

  std::vector<double> mags(bins);
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const double itd_samples =
        itd::itd_model(positions[p]) * static_cast<double>(sample_rate_hz);
    for (int ear = 0; ear < 2; ++ear) {
      for (int k = 1; k <= bins; ++k) {
        const double u = static_cast<double>(k) / bins;
        mags[k - 1] =
            std::exp(synth_log_magnitude(profile, positions[p], ear, u));
      }
      const std::vector<double> mp = spectra::minimum_phase_ir(
          mags, nfft, std::min(taps, nfft));
      const double half = ear == 0 ? -itd_samples / 2.0 : itd_samples / 2.0;
      const int onset = pre_roll + static_cast<int>(std::lround(half));
      std::vector<float>& dst = ear == 0 ? set.impulse_responses[p].left
                                         : set.impulse_responses[p].right;
      dst.assign(taps, 0.0f);
      for (int t = 0; t < taps; ++t) {
        const int src = t - onset;
        if (src >= 0 && src < static_cast<int>(mp.size())) {
          dst[t] = static_cast<float>(mp[src]);
        }
      }
    }
  }
  set.validate();
  return set;
}

}  // namespace hrtfup::data
