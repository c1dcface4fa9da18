#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hrtfup/types.hpp"

namespace hrtfup::spectra {

// Default transform size; gives 128 bins per ear and a 256-channel tensor.
inline constexpr int kDefaultNfft = 256;
inline constexpr double kMagnitudeFloor = 1e-6;

struct MagnitudeHrtf {
  std::string subject_id;
  int sample_rate_hz = 48000;
  int nfft = kDefaultNfft;
  std::vector<SphericalDirection> positions;
  // [position][ear][bin] with bins 1..nfft/2 (DC excluded).
  std::vector<double> magnitudes;

  int bins_per_ear() const { return nfft / 2; }
  std::size_t size() const { return positions.size(); }

  double& at(std::size_t position, int ear, int bin) {
    return magnitudes[(position * 2 + ear) * bins_per_ear() + bin];
  }
  double at(std::size_t position, int ear, int bin) const {
    return magnitudes[(position * 2 + ear) * bins_per_ear() + bin];
  }

  void validate() const;
};

// |DFT| of the zero-padded IR at bins 1..nfft/2. nfft must be even and >= L.
std::vector<double> magnitude_spectrum(std::span<const float> ir, int nfft);
std::vector<double> magnitude_spectrum(std::span<const double> ir, int nfft);

// Minimum-phase IR whose magnitude matches `mags` (bins 1..nfft/2; the DC
// magnitude is taken from bin 1). Magnitudes are floored at kMagnitudeFloor
// before the logarithm. Output truncated to taps_out.
std::vector<double> minimum_phase_ir(std::span<const double> mags, int nfft,
                                     int taps_out);

MagnitudeHrtf magnitudes_of(const HrirSet& set, int nfft = kDefaultNfft);

// Minimum-phase IRs per ear plus the spherical-head ITD per position.
HrirSet reconstruct_set(const MagnitudeHrtf& mags,
                        double head_radius_m = 0.0875,
                        double speed_m_s = 343.0, int taps_out = 0);

void save_magnitudes(const MagnitudeHrtf& mags,
                     const std::filesystem::path& path);
MagnitudeHrtf load_magnitudes(const std::filesystem::path& path);

}  // namespace hrtfup::spectra
