#include "hrtfup/spectra.hpp"

#include <cmath>
#include <complex>

#include "hrtfup/error.hpp"
#include "hrtfup/fft.hpp"
#include "hrtfup/hrirset_io.hpp"
#include "hrtfup/itd.hpp"

namespace hrtfup::spectra {

void MagnitudeHrtf::validate() const {
  if (positions.empty()) throw_data("magnitude set: empty positions");
  if (nfft < 2 || nfft % 2 != 0) throw_data("magnitude set: invalid nfft");
  if (magnitudes.size() !=
      positions.size() * 2 * static_cast<std::size_t>(bins_per_ear())) {
    throw_data("magnitude set: payload size mismatch");
  }
  for (double m : magnitudes) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw_data("magnitude set: negative or non-finite magnitude");
    }
  }
}

namespace {

template <class T>
std::vector<double> magnitude_spectrum_impl(std::span<const T> ir, int nfft) {
  if (nfft <= 0 || nfft % 2 != 0) {
    throw_invalid("magnitude_spectrum: nfft must be even and positive");
  }
  if (static_cast<std::size_t>(nfft) < ir.size()) {
    throw_invalid("magnitude_spectrum: nfft smaller than IR length");
  }
  auto spectrum = fft_real(ir, static_cast<std::size_t>(nfft));
  std::vector<double> mags(nfft / 2);
  for (int k = 1; k <= nfft / 2; ++k) {
    mags[k - 1] = std::abs(spectrum[k]);
  }
  return mags;
}

}  // namespace

std::vector<double> magnitude_spectrum(std::span<const float> ir, int nfft) {
  return magnitude_spectrum_impl(ir, nfft);
}

std::vector<double> magnitude_spectrum(std::span<const double> ir, int nfft) {
  return magnitude_spectrum_impl(ir, nfft);
}

std::vector<double> minimum_phase_ir(std::span<const double> mags, int nfft,
                                     int taps_out) {
  if (nfft < 4 || nfft % 2 != 0) {
    throw_invalid("minimum_phase_ir: nfft must be even and >= 4");
  }
  if (mags.size() != static_cast<std::size_t>(nfft / 2)) {
    throw_invalid("minimum_phase_ir: expected nfft/2 magnitudes");
  }
  if (taps_out <= 0 || taps_out > nfft) {
    throw_invalid("minimum_phase_ir: taps_out must be in 1..nfft");
  }

  // Full hermitian log-magnitude spectrum; DC borrows bin 1.
  std::vector<std::complex<double>> buf(nfft);
  auto log_floor = [](double m) {
    return std::log(std::max(m, kMagnitudeFloor));
  };
  buf[0] = log_floor(mags[0]);
  for (int k = 1; k <= nfft / 2; ++k) {
    buf[k] = log_floor(mags[k - 1]);
  }
  for (int k = nfft / 2 + 1; k < nfft; ++k) {
    buf[k] = buf[nfft - k];
  }

  // Real cepstrum, folded onto the causal half (the discrete Hilbert
  // relation between log magnitude and minimum phase).
  fft_inplace(buf, true);
  buf[0] = buf[0].real();
  for (int k = 1; k < nfft / 2; ++k) {
    buf[k] = 2.0 * buf[k].real();
  }
  buf[nfft / 2] = buf[nfft / 2].real();
  for (int k = nfft / 2 + 1; k < nfft; ++k) {
    buf[k] = 0.0;
  }

  fft_inplace(buf, false);
  for (auto& v : buf) v = std::exp(v);
  fft_inplace(buf, true);

  std::vector<double> ir(taps_out);
  for (int t = 0; t < taps_out; ++t) {
    ir[t] = buf[t].real();
  }
  return ir;
}

MagnitudeHrtf magnitudes_of(const HrirSet& set, int nfft) {
  set.validate();
  if (nfft < set.taps()) {
    throw_invalid("magnitudes_of: nfft smaller than IR length");
  }
  MagnitudeHrtf out;
  out.subject_id = set.subject_id;
  out.sample_rate_hz = set.sample_rate_hz;
  out.nfft = nfft;
  out.positions = set.positions;
  out.magnitudes.reserve(set.size() * 2 * (nfft / 2));
  for (const StereoIr& ir : set.impulse_responses) {
    auto l = magnitude_spectrum(std::span<const float>(ir.left), nfft);
    auto r = magnitude_spectrum(std::span<const float>(ir.right), nfft);
    out.magnitudes.insert(out.magnitudes.end(), l.begin(), l.end());
    out.magnitudes.insert(out.magnitudes.end(), r.begin(), r.end());
  }
  return out;
}

void save_magnitudes(const MagnitudeHrtf& mags,
                     const std::filesystem::path& path) {
  mags.validate();
  io::ContainerHeader h;
  h.magic = "HRTFMAG1";
  h.subject_id = mags.subject_id;
  h.sample_rate_hz = mags.sample_rate_hz;
  h.num_positions = static_cast<int>(mags.size());
  h.taps = mags.bins_per_ear();
  h.positions = mags.positions;
  std::vector<float> payload(mags.magnitudes.begin(), mags.magnitudes.end());
  io::write_container(path, h, payload);
}

MagnitudeHrtf load_magnitudes(const std::filesystem::path& path) {
  std::vector<float> payload;
  io::ContainerHeader h = io::read_container(path, "HRTFMAG1", payload);
  MagnitudeHrtf mags;
  mags.subject_id = h.subject_id;
  mags.sample_rate_hz = h.sample_rate_hz;
  mags.nfft = 2 * h.taps;
  mags.positions = std::move(h.positions);
  mags.magnitudes.assign(payload.begin(), payload.end());
  mags.validate();
  return mags;
}

HrirSet reconstruct_set(const MagnitudeHrtf& mags, double head_radius_m,
                        double speed_m_s, int taps_out) {
  mags.validate();
  if (taps_out <= 0) taps_out = mags.nfft;
  const int bins = mags.bins_per_ear();
  HrirSet out;
  out.subject_id = mags.subject_id;
  out.sample_rate_hz = mags.sample_rate_hz;
  out.positions = mags.positions;
  out.impulse_responses.reserve(mags.size());
  std::vector<double> ear_mags(bins);
  for (std::size_t p = 0; p < mags.size(); ++p) {
    std::vector<float> ears[2];
    for (int ear = 0; ear < 2; ++ear) {
      for (int k = 0; k < bins; ++k) ear_mags[k] = mags.at(p, ear, k);
      auto ir = minimum_phase_ir(ear_mags, mags.nfft, taps_out);
      ears[ear].assign(ir.begin(), ir.end());
    }
    const double itd_s = itd::itd_model(mags.positions[p], head_radius_m,
                                        speed_m_s);
    out.impulse_responses.push_back(
        itd::apply_itd(ears[0], ears[1], itd_s, mags.sample_rate_hz));
  }
  return out;
}

}  // namespace hrtfup::spectra
