#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hrtfup/neural/layers.hpp"
#include "hrtfup/neural/losses.hpp"
#include "hrtfup/projection.hpp"
#include "hrtfup/spectra.hpp"

namespace hrtfup::neural {

struct GanConfig {
  int epochs = 300;
  double lr_generator = 2.0e-4;
  double lr_discriminator = 1.5e-6;
  double content_weight = 0.1;      // lambda_C
  double adversarial_weight = 0.001;  // lambda_A
  int batch_size = 8;
  int residual_blocks = 8;  // B
  int hidden_features = 512;
  int upsample_factor = 2;  // r = 2^R
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  int d_updates_per_g = 4;

  void validate() const;

  // Hyperparameter table values per upsampling factor (r in {2,4,8,16}).
  static GanConfig paper_defaults(int upsample_factor);
};

struct EpochRecord {
  double generator_total = 0.0;
  double content = 0.0;
  double adversarial = 0.0;
  double discriminator = 0.0;
  double validation_content = 0.0;  // 0 when no validation pairs given
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  double final_validation_lsd = 0.0;
  double content_norm_lsd = 1.0;
  double content_norm_ild = 1.0;
};

void save_report_csv(const TrainReport& report,
                     const std::filesystem::path& path);

class Generator {
 public:
  Generator() = default;
  // input_width is W/r; the output width is input_width * upsample_factor.
  Generator(int channels, int hidden_features, int residual_blocks,
            int upsample_factor, int input_width);

  void init(Rng& rng);
  Batch forward(const Batch& x, bool training);
  Batch backward(const Batch& gy);
  std::vector<ParamRef> params();
  void zero_grads();

  int channels() const { return channels_; }
  int input_width() const { return input_width_; }
  int output_width() const { return input_width_ * factor_; }
  int hidden_features() const { return hidden_; }
  int residual_blocks() const { return static_cast<int>(blocks_.size()); }
  int upsample_factor() const { return factor_; }

 private:
  struct ResBlock {
    PanelConv conv1;
    BatchNorm bn1;
    PReLU act;
    PanelConv conv2;
    BatchNorm bn2;
    Batch cached_input;
  };
  struct UpBlock {
    PanelConv conv;
    DepthToSpace shuffle;
    PReLU act;
  };

  int channels_ = 0, hidden_ = 0, input_width_ = 0, factor_ = 1;
  PanelConv conv_in_;
  PReLU act_in_;
  std::vector<ResBlock> blocks_;
  std::vector<UpBlock> ups_;
  PanelConv conv_out_;
  Softplus softplus_;
};

class Discriminator {
 public:
  Discriminator() = default;
  Discriminator(int channels, int hidden_features, int input_width);

  void init(Rng& rng);
  // Returns one probability per batch sample.
  std::vector<double> forward(const Batch& x, bool training);
  // Gradient w.r.t. the input batch given gradients w.r.t. the output
  // probabilities; accumulates parameter gradients.
  Batch backward(const std::vector<double>& gprob);
  std::vector<ParamRef> params();
  void zero_grads();

  int input_width() const { return input_width_; }

 private:
  struct ConvBlock {
    PanelConv conv;
    bool has_bn = true;
    BatchNorm bn;
    LeakyReLU act{0.2};
  };

  int channels_ = 0, hidden_ = 0, input_width_ = 0;
  int flat_features_ = 0, flat_width_ = 0, flat_channels_ = 0;
  std::vector<ConvBlock> convs_;
  Dense fc1_;
  Dense fc2_;
  std::vector<double> cached_fc1_out_;
  std::vector<double> cached_prob_;
  int cached_count_ = 0;
};

class Adam {
 public:
  Adam() = default;
  Adam(std::vector<ParamRef> params, double lr, double beta1, double beta2,
       double epsilon = 1e-8);
  void step();

 private:
  std::vector<ParamRef> params_;
  std::vector<std::vector<double>> m_, v_;
  double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, epsilon_ = 1e-8;
  long t_ = 0;
};

struct TrainPair {
  cubesphere::PanelTensor lr;
  cubesphere::PanelTensor hr;
};

struct TrainResult {
  Generator generator;
  GanConfig config;
  TrainReport report;
};

// Adversarial training: d_updates_per_g discriminator updates (real label 1,
// generated label 0) per generator update on
// l = lambda_C * content + lambda_A * adversarial. Deterministic per seed.
TrainResult train(const std::vector<TrainPair>& train_pairs,
                  const std::vector<TrainPair>& validation_pairs,
                  const GanConfig& cfg, std::uint64_t seed);

cubesphere::PanelTensor upsample_tensor(Generator& generator,
                                        const cubesphere::PanelTensor& lr);

spectra::MagnitudeHrtf upsample(Generator& generator,
                                const cubesphere::PanelTensor& lr,
                                const projection::CubedSphereGrid& grid,
                                int sample_rate_hz,
                                const std::string& subject_id);

// Checkpoint: JSON header (magic SRGANCK1, config echo, parameter manifest)
// followed by the float32 parameter payload in manifest order.
void save_checkpoint(Generator& generator, const GanConfig& cfg,
                     const std::filesystem::path& path);

struct Checkpoint {
  Generator generator;
  GanConfig config;
  int channels = 0;
  int input_width = 0;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hrtfup::neural
