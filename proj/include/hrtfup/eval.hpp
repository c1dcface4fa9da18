#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hrtfup/barycentric.hpp"
#include "hrtfup/cubesphere.hpp"
#include "hrtfup/itd.hpp"
#include "hrtfup/neural/gan.hpp"
#include "hrtfup/spectra.hpp"

namespace hrtfup::eval {

struct EvalReport {
  std::string method;
  int factor = 1;           // upsampling factor r
  int input_positions = 0;  // N_in
  int output_positions = 0;
  double mean_lsd_db = 0.0;
  double sd_lsd_db = 0.0;  // population SD
  double mean_ild_db = 0.0;
  std::vector<double> per_position_lsd;
};

// Per-position LSD (both ears pooled into the bin sum) plus aggregates.
EvalReport evaluate(const spectra::MagnitudeHrtf& reference,
                    const spectra::MagnitudeHrtf& candidate);

enum class SelectionMode { generic, unique };

// Index of the most generic (lowest average pairwise LSD) or most unique
// (highest) subject. Ties break toward the smaller subject_id.
std::size_t selection_baseline(
    const std::vector<spectra::MagnitudeHrtf>& train, SelectionMode mode);

struct CompareOptions {
  std::vector<int> factors{2, 4, 8, 16};
  bool barycentric = false;
  // Trained models per upsampling factor.
  std::map<int, std::shared_ptr<neural::Checkpoint>> srgan;
  // Preprocessed training subjects on the same hi-res grid; enables the
  // Selection-1/2 baselines.
  const std::vector<spectra::MagnitudeHrtf>* selection_database = nullptr;
  // Alignment parameters applied to the subject before interpolation.
  itd::KalmanOverrides kalman;
  int pre_roll = 4;
  int length_out = 0;  // 0: half the input taps
  int nfft = spectra::kDefaultNfft;
  int downsample_offset = cubesphere::kCenteredOffset;
};

// Target pipeline per the preprocessing order: align -> barycentric to the
// grid -> magnitudes; candidates are evaluated against that target.
std::vector<EvalReport> compare_methods(
    const HrirSet& subject, const projection::CubedSphereGrid& grid_hi,
    const CompareOptions& options);

// CSV rows: method,r,mean_lsd_db,sd_lsd_db,mean_ild_db
void save_reports_csv(const std::vector<EvalReport>& reports,
                      const std::filesystem::path& path);

// Line chart of mean LSD against the upsampling factor, one series per
// method.
void save_reports_svg(const std::vector<EvalReport>& reports,
                      const std::filesystem::path& path);

}  // namespace hrtfup::eval
