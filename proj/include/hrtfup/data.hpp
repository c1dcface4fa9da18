#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hrtfup/types.hpp"

namespace hrtfup::data {

HrirSet load_hrir_set(const std::filesystem::path& path);

// Round-trips bit-exactly through load_hrir_set.
void save_hrir_set(const HrirSet& set, const std::filesystem::path& path);

struct DatasetSplit {
  std::vector<std::string> train_subjects;
  std::vector<std::string> validation_subjects;
};

// Seeded shuffle, then floor(train_fraction * N) subjects for training
// (clamped to keep both sides non-empty). Subjects are never split by ear.
DatasetSplit split_subjects(std::vector<std::string> subject_ids,
                            double train_fraction, std::uint64_t seed);

// Analytic per-subject spectral profile: a smooth log-magnitude surface made
// of a shared spectral tilt plus a low-order spherical-harmonic mixture with
// seeded coefficients. The right ear evaluates the left-ear surface at the
// azimuth-mirrored direction, so ears are exact mirrors by construction.
struct SynthProfile {
  std::array<double, 3> tilt{};                  // spectral envelope terms
  std::array<std::array<double, 3>, 9> angular{};  // per-basis envelopes
};

SynthProfile make_synth_profile(std::uint64_t seed);

// Log magnitude at direction `dir` for `ear` (0 left, 1 right) and relative
// frequency u = bin/(nfft/2) in (0, 1].
double synth_log_magnitude(const SynthProfile& profile,
                           const SphericalDirection& dir, int ear, double u);

// Deterministic synthetic subject: per direction, the analytic magnitude is
// rendered minimum-phase and the two ears are delayed by the spherical-head
// ITD split evenly around a common pre-roll.
HrirSet synth_subject(std::uint64_t seed,
                      std::vector<SphericalDirection> positions,
                      int sample_rate_hz, int taps,
                      std::string subject_id = "");

}  // namespace hrtfup::data
