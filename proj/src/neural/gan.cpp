#include "hrtfup/neural/gan.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "hrtfup/error.hpp"

namespace hrtfup::neural {

namespace {

int log2_exact(int v) {
  int r = 0;
  while ((1 << r) < v) ++r;
  return r;
}

int conv_kernel_for(int input_width) { return input_width > 1 ? 3 : 1; }

}  // namespace

void GanConfig::validate() const {
  if (epochs < 1) throw_invalid("gan config: epochs must be >= 1");
  if (lr_generator <= 0.0 || lr_discriminator <= 0.0) {
    throw_invalid("gan config: learning rates must be positive");
  }
  if (content_weight < 0.0 || adversarial_weight < 0.0) {
    throw_invalid("gan config: loss weights must be non-negative");
  }
  if (batch_size < 1) throw_invalid("gan config: batch size must be >= 1");
  if (residual_blocks < 1) throw_invalid("gan config: B must be >= 1");
  if (hidden_features < 8 || hidden_features % 8 != 0) {
    throw_invalid("gan config: hidden features must be a multiple of 8");
  }
  if (upsample_factor < 1 ||
      (upsample_factor & (upsample_factor - 1)) != 0) {
    throw_invalid("gan config: upsample factor must be a power of two");
  }
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw_invalid("gan config: Adam betas must be in (0, 1)");
  }
  if (d_updates_per_g < 1) {
    throw_invalid("gan config: d_updates_per_g must be >= 1");
  }
}

GanConfig GanConfig::paper_defaults(int upsample_factor) {
  GanConfig cfg;
  cfg.upsample_factor = upsample_factor;
  switch (upsample_factor) {
    case 2:  // 320 -> 1280
      cfg.lr_generator = 2.0e-4;
      cfg.content_weight = 0.1;
      cfg.adversarial_weight = 0.001;
      break;
    case 4:  // 80 -> 1280
      cfg.lr_generator = 8.0e-4;
      cfg.content_weight = 0.01;
      cfg.adversarial_weight = 0.1;
      break;
    case 8:  // 20 -> 1280
      cfg.lr_generator = 2.0e-4;
      cfg.content_weight = 0.001;
      cfg.adversarial_weight = 0.001;
      break;
    case 16:  // 5 -> 1280
      cfg.lr_generator = 2.0e-4;
      cfg.content_weight = 0.01;
      cfg.adversarial_weight = 0.01;
      break;
    default:
      throw_invalid("paper defaults exist for r in {2, 4, 8, 16}");
  }
  return cfg;
}

void save_report_csv(const TrainReport& report,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw_data("report: cannot open for writing: " + path.string());
  out << "epoch,generator_total,content,adversarial,discriminator,"
         "validation_content\n";
  char buf[192];
  for (std::size_t e = 0; e < report.epochs.size(); ++e) {
    const EpochRecord& r = report.epochs[e];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  e + 1, r.generator_total, r.content, r.adversarial,
                  r.discriminator, r.validation_content);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "final_validation_lsd,%.17g\n",
                report.final_validation_lsd);
  out << buf;
}

Generator::Generator(int channels, int hidden_features, int residual_blocks,
                     int upsample_factor, int input_width)
    : channels_(channels),
      hidden_(hidden_features),
      input_width_(input_width),
      factor_(upsample_factor) {
  const int w0 = input_width;
  conv_in_ = PanelConv(channels, hidden_, conv_kernel_for(w0), 1, w0);
  blocks_.resize(residual_blocks);
  for (ResBlock& b : blocks_) {
    b.conv1 = PanelConv(hidden_, hidden_, conv_kernel_for(w0), 1, w0);
    b.bn1 = BatchNorm(hidden_);
    b.conv2 = PanelConv(hidden_, hidden_, conv_kernel_for(w0), 1, w0);
    b.bn2 = BatchNorm(hidden_);
  }
  const int stages = log2_exact(upsample_factor);
  ups_.resize(stages);
  int w = w0;
  for (UpBlock& u : ups_) {
    u.conv = PanelConv(hidden_, 4 * hidden_, conv_kernel_for(w), 1, w);
    w *= 2;
  }
  conv_out_ = PanelConv(hidden_, channels, conv_kernel_for(w), 1, w);
}

void Generator::init(Rng& rng) {
  conv_in_.init(rng);
  for (ResBlock& b : blocks_) {
    b.conv1.init(rng);
    b.conv2.init(rng);
  }
  for (UpBlock& u : ups_) u.conv.init(rng);
  conv_out_.init(rng);
}

Batch Generator::forward(const Batch& x, bool training) {
  Batch h = act_in_.forward(conv_in_.forward(x));
  for (ResBlock& b : blocks_) {
    b.cached_input = h;
    Batch t = b.bn1.forward(b.conv1.forward(h), training);
    t = b.act.forward(t);
    t = b.bn2.forward(b.conv2.forward(t), training);
    for (std::size_t k = 0; k < t.values.size(); ++k) {
      t.values[k] += h.values[k];
    }
    h = std::move(t);
  }
  for (UpBlock& u : ups_) {
    h = u.act.forward(u.shuffle.forward(u.conv.forward(h)));
  }
  return softplus_.forward(conv_out_.forward(h));
}

Batch Generator::backward(const Batch& gy) {
  Batch g = conv_out_.backward(softplus_.backward(gy));
  for (auto it = ups_.rbegin(); it != ups_.rend(); ++it) {
    g = it->conv.backward(it->shuffle.backward(it->act.backward(g)));
  }
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
    Batch branch = it->bn2.backward(g);
    branch = it->conv2.backward(branch);
    branch = it->act.backward(branch);
    branch = it->bn1.backward(branch);
    branch = it->conv1.backward(branch);
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      g.values[k] += branch.values[k];
    }
  }
  return conv_in_.backward(act_in_.backward(g));
}

std::vector<ParamRef> Generator::params() {
  std::vector<ParamRef> out;
  conv_in_.collect("g.conv_in", out);
  act_in_.collect("g.act_in", out);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const std::string p = "g.block" + std::to_string(i);
    blocks_[i].conv1.collect(p + ".conv1", out);
    blocks_[i].bn1.collect(p + ".bn1", out);
    blocks_[i].act.collect(p + ".act", out);
    blocks_[i].conv2.collect(p + ".conv2", out);
    blocks_[i].bn2.collect(p + ".bn2", out);
  }
  for (std::size_t i = 0; i < ups_.size(); ++i) {
    const std::string p = "g.up" + std::to_string(i);
    ups_[i].conv.collect(p + ".conv", out);
    ups_[i].act.collect(p + ".act", out);
  }
  conv_out_.collect("g.conv_out", out);
  return out;
}

void Generator::zero_grads() {
  for (ParamRef& p : params()) {
    if (p.grad) std::fill(p.grad->begin(), p.grad->end(), 0.0);
  }
}

Discriminator::Discriminator(int channels, int hidden_features,
                             int input_width)
    : channels_(channels), hidden_(hidden_features),
      input_width_(input_width) {
  const int base = hidden_ / 8;
  const int plan_channels[8] = {base,      base,      base * 2, base * 2,
                                base * 4,  base * 4,  hidden_,  hidden_};
  convs_.resize(8);
  int w = input_width;
  int cin = channels;
  for (int l = 0; l < 8; ++l) {
    const int stride = (l % 2 == 1) ? 2 : 1;
    const int k = conv_kernel_for(w);
    convs_[l].conv = PanelConv(cin, plan_channels[l], k, stride, w);
    convs_[l].has_bn = l != 0;
    if (convs_[l].has_bn) convs_[l].bn = BatchNorm(plan_channels[l]);
    w = convs_[l].conv.out_width();
    cin = plan_channels[l];
  }
  flat_width_ = w;
  flat_channels_ = cin;
  flat_features_ = cin * kNumPanels * w * w;
  fc1_ = Dense(flat_features_, 2 * hidden_);
  fc2_ = Dense(2 * hidden_, 1);
}

void Discriminator::init(Rng& rng) {
  for (ConvBlock& b : convs_) b.conv.init(rng);
  fc1_.init(rng);
  fc2_.init(rng);
}

std::vector<double> Discriminator::forward(const Batch& x, bool training) {
  Batch h = x;
  for (ConvBlock& b : convs_) {
    h = b.conv.forward(h);
    if (b.has_bn) h = b.bn.forward(h, training);
    h = b.act.forward(h);
  }
  cached_count_ = h.count;
  // Flatten per sample.
  std::vector<double> flat(h.values.begin(), h.values.end());
  std::vector<double> z = fc1_.forward(flat, h.count);
  cached_fc1_out_ = z;
  for (double& v : z) {
    if (v < 0.0) v *= 0.2;
  }
  std::vector<double> logits = fc2_.forward(z, h.count);
  cached_prob_ = sigmoid(logits);
  return cached_prob_;
}

Batch Discriminator::backward(const std::vector<double>& gprob) {
  std::vector<double> glogit = sigmoid_backward(cached_prob_, gprob);
  std::vector<double> g1 = fc2_.backward(glogit, cached_count_);
  for (std::size_t k = 0; k < g1.size(); ++k) {
    if (cached_fc1_out_[k] < 0.0) g1[k] *= 0.2;
  }
  std::vector<double> gflat = fc1_.backward(g1, cached_count_);
  Batch g = Batch::zeros(cached_count_, flat_channels_, flat_width_,
                         flat_width_);
  g.values.assign(gflat.begin(), gflat.end());
  for (auto it = convs_.rbegin(); it != convs_.rend(); ++it) {
    g = it->act.backward(g);
    if (it->has_bn) g = it->bn.backward(g);
    g = it->conv.backward(g);
  }
  return g;
}

std::vector<ParamRef> Discriminator::params() {
  std::vector<ParamRef> out;
  for (std::size_t i = 0; i < convs_.size(); ++i) {
    const std::string p = "d.conv" + std::to_string(i);
    convs_[i].conv.collect(p, out);
    if (convs_[i].has_bn) convs_[i].bn.collect(p + ".bn", out);
  }
  fc1_.collect("d.fc1", out);
  fc2_.collect("d.fc2", out);
  return out;
}

void Discriminator::zero_grads() {
  for (ParamRef& p : params()) {
    if (p.grad) std::fill(p.grad->begin(), p.grad->end(), 0.0);
  }
}

Adam::Adam(std::vector<ParamRef> params, double lr, double beta1, double beta2,
           double epsilon)
    : params_(std::move(params)),
      lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {
  for (const ParamRef& p : params_) {
    m_.emplace_back(p.trainable ? p.value->size() : 0, 0.0);
    v_.emplace_back(p.trainable ? p.value->size() : 0, 0.0);
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t p = 0; p < params_.size(); ++p) {
    if (!params_[p].trainable || !params_[p].grad) continue;
    std::vector<double>& value = *params_[p].value;
    const std::vector<double>& grad = *params_[p].grad;
    std::vector<double>& m = m_[p];
    std::vector<double>& v = v_[p];
    for (std::size_t k = 0; k < value.size(); ++k) {
      m[k] = beta1_ * m[k] + (1.0 - beta1_) * grad[k];
      v[k] = beta2_ * v[k] + (1.0 - beta2_) * grad[k] * grad[k];
      const double mhat = m[k] / bc1;
      const double vhat = v[k] / bc2;
      value[k] -= lr_ * mhat / (std::sqrt(vhat) + epsilon_);
    }
  }
}

namespace {

// Seeded cyclic batch sampler; reshuffles whenever the list is exhausted.
class BatchSampler {
 public:
  BatchSampler(std::size_t n, std::uint64_t seed) : rng_(seed), order_(n) {
    std::iota(order_.begin(), order_.end(), 0);
    rng_.shuffle(order_);
  }

  std::vector<std::size_t> draw(std::size_t batch) {
    std::vector<std::size_t> out;
    out.reserve(batch);
    for (std::size_t k = 0; k < batch; ++k) {
      if (cursor_ == order_.size()) {
        rng_.shuffle(order_);
        cursor_ = 0;
      }
      out.push_back(order_[cursor_++]);
    }
    return out;
  }

 private:
  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

Batch gather(const std::vector<TrainPair>& pairs,
             const std::vector<std::size_t>& idx, bool hr) {
  std::vector<const cubesphere::PanelTensor*> ts;
  ts.reserve(idx.size());
  for (std::size_t i : idx) {
    ts.push_back(hr ? &pairs[i].hr : &pairs[i].lr);
  }
  return batch_from_tensors(ts);
}

}  // namespace

TrainResult train(const std::vector<TrainPair>& train_pairs,
                  const std::vector<TrainPair>& validation_pairs,
                  const GanConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (train_pairs.empty()) throw_data("train: empty dataset");
  const cubesphere::PanelTensor& hr0 = train_pairs.front().hr;
  const cubesphere::PanelTensor& lr0 = train_pairs.front().lr;
  if (lr0.width * cfg.upsample_factor != hr0.width) {
    throw_data("train: LR width * r != HR width");
  }
  for (const TrainPair& p : train_pairs) {
    if (p.lr.width != lr0.width || p.hr.width != hr0.width ||
        p.lr.channels != lr0.channels || p.hr.channels != hr0.channels) {
      throw_data("train: inconsistent pair shapes");
    }
  }
  for (const TrainPair& p : validation_pairs) {
    if (p.lr.width != lr0.width || p.hr.width != hr0.width ||
        p.lr.channels != lr0.channels || p.hr.channels != hr0.channels) {
      throw_data("train: inconsistent validation shapes");
    }
  }

  Rng rng(seed);
  TrainResult result;
  result.config = cfg;
  result.generator = Generator(hr0.channels, cfg.hidden_features,
                               cfg.residual_blocks, cfg.upsample_factor,
                               lr0.width);
  result.generator.init(rng);
  Discriminator discriminator(hr0.channels, cfg.hidden_features, hr0.width);
  discriminator.init(rng);

  Adam adam_g(result.generator.params(), cfg.lr_generator, cfg.adam_beta1,
              cfg.adam_beta2);
  Adam adam_d(discriminator.params(), cfg.lr_discriminator, cfg.adam_beta1,
              cfg.adam_beta2);

  BatchSampler sampler(train_pairs.size(), rng.next_u64());
  ContentLoss content_loss;

  const int steps_per_epoch = static_cast<int>(
      (train_pairs.size() + cfg.batch_size - 1) / cfg.batch_size);
  const std::vector<double> ones(cfg.batch_size, 1.0);
  const std::vector<double> zeros_(cfg.batch_size, 0.0);

  auto check_finite = [&](double v, int epoch, int step, const char* what) {
    if (!std::isfinite(v)) {
      throw_numeric("train: non-finite " + std::string(what) + " at epoch " +
                    std::to_string(epoch + 1) + " step " +
                    std::to_string(step + 1));
    }
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    EpochRecord rec;
    int d_steps = 0;
    for (int step = 0; step < steps_per_epoch; ++step) {
      for (int du = 0; du < cfg.d_updates_per_g; ++du) {
        const auto idx = sampler.draw(cfg.batch_size);
        Batch lr = gather(train_pairs, idx, false);
        Batch hr = gather(train_pairs, idx, true);
        Batch fake = result.generator.forward(lr, true);

        discriminator.zero_grads();
        std::vector<double> grad;
        std::vector<double> d_real = discriminator.forward(hr, true);
        const double loss_real = bce_loss(d_real, ones, &grad);
        for (double& g : grad) g *= 0.5;
        discriminator.backward(grad);
        std::vector<double> d_fake = discriminator.forward(fake, true);
        const double loss_fake = bce_loss(d_fake, zeros_, &grad);
        for (double& g : grad) g *= 0.5;
        discriminator.backward(grad);
        adam_d.step();

        const double d_loss = 0.5 * (loss_real + loss_fake);
        check_finite(d_loss, epoch, step, "discriminator loss");
        rec.discriminator += d_loss;
        ++d_steps;
      }

      const auto idx = sampler.draw(cfg.batch_size);
      Batch lr = gather(train_pairs, idx, false);
      Batch hr = gather(train_pairs, idx, true);

      result.generator.zero_grads();
      Batch fake = result.generator.forward(lr, true);
      Batch g_content;
      const double c_loss = content_loss(hr, fake, &g_content);

      discriminator.zero_grads();
      std::vector<double> d_out = discriminator.forward(fake, true);
      std::vector<double> g_adv_out;
      const double a_loss = bce_loss(d_out, ones, &g_adv_out);
      Batch g_fake_adv = discriminator.backward(g_adv_out);
      discriminator.zero_grads();  // G step must not move D

      Batch g_total = std::move(g_content);
      for (std::size_t k = 0; k < g_total.values.size(); ++k) {
        g_total.values[k] = cfg.content_weight * g_total.values[k] +
                            cfg.adversarial_weight * g_fake_adv.values[k];
      }
      result.generator.backward(g_total);
      adam_g.step();

      const double total =
          cfg.content_weight * c_loss + cfg.adversarial_weight * a_loss;
      check_finite(total, epoch, step, "generator loss");
      rec.generator_total += total;
      rec.content += c_loss;
      rec.adversarial += a_loss;
    }

    rec.generator_total /= steps_per_epoch;
    rec.content /= steps_per_epoch;
    rec.adversarial /= steps_per_epoch;
    rec.discriminator /= std::max(d_steps, 1);

    if (!validation_pairs.empty()) {
      double vc = 0.0;
      for (const TrainPair& p : validation_pairs) {
        Batch lr = batch_from_tensor(p.lr);
        Batch hr = batch_from_tensor(p.hr);
        Batch out = result.generator.forward(lr, false);
        vc += content_loss(hr, out, nullptr);
      }
      rec.validation_content = vc / static_cast<double>(
                                        validation_pairs.size());
    }
    result.report.epochs.push_back(rec);
  }

  if (!validation_pairs.empty()) {
    double vl = 0.0;
    for (const TrainPair& p : validation_pairs) {
      Batch lr = batch_from_tensor(p.lr);
      Batch hr = batch_from_tensor(p.hr);
      Batch out = result.generator.forward(lr, false);
      vl += lsd_batch(hr, out, nullptr);
    }
    result.report.final_validation_lsd =
        vl / static_cast<double>(validation_pairs.size());
  }
  result.report.content_norm_lsd = content_loss.lsd_norm();
  result.report.content_norm_ild = content_loss.ild_norm();
  return result;
}

cubesphere::PanelTensor upsample_tensor(Generator& generator,
                                        const cubesphere::PanelTensor& lr) {
  if (lr.width != generator.input_width() ||
      lr.channels != generator.channels()) {
    throw_data("upsample: LR shape does not match generator");
  }
  Batch out = generator.forward(batch_from_tensor(lr), false);
  return tensor_from_batch(out, 0);
}

spectra::MagnitudeHrtf upsample(Generator& generator,
                                const cubesphere::PanelTensor& lr,
                                const projection::CubedSphereGrid& grid,
                                int sample_rate_hz,
                                const std::string& subject_id) {
  cubesphere::PanelTensor hr = upsample_tensor(generator, lr);
  if (hr.width != grid.width()) {
    throw_data("upsample: generator output does not match grid width");
  }
  return cubesphere::mag_from_tensor(hr, grid, sample_rate_hz, subject_id);
}

namespace {

nlohmann::ordered_json config_to_json(const GanConfig& c) {
  nlohmann::ordered_json j;
  j["epochs"] = c.epochs;
  j["lr_generator"] = c.lr_generator;
  j["lr_discriminator"] = c.lr_discriminator;
  j["content_weight"] = c.content_weight;
  j["adversarial_weight"] = c.adversarial_weight;
  j["batch_size"] = c.batch_size;
  j["residual_blocks"] = c.residual_blocks;
  j["hidden_features"] = c.hidden_features;
  j["upsample_factor"] = c.upsample_factor;
  j["adam_beta1"] = c.adam_beta1;
  j["adam_beta2"] = c.adam_beta2;
  j["d_updates_per_g"] = c.d_updates_per_g;
  return j;
}

GanConfig config_from_json(const nlohmann::json& j) {
  GanConfig c;
  c.epochs = j.at("epochs").get<int>();
  c.lr_generator = j.at("lr_generator").get<double>();
  c.lr_discriminator = j.at("lr_discriminator").get<double>();
  c.content_weight = j.at("content_weight").get<double>();
  c.adversarial_weight = j.at("adversarial_weight").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.residual_blocks = j.at("residual_blocks").get<int>();
  c.hidden_features = j.at("hidden_features").get<int>();
  c.upsample_factor = j.at("upsample_factor").get<int>();
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.d_updates_per_g = j.at("d_updates_per_g").get<int>();
  return c;
}

}  // namespace

void save_checkpoint(Generator& generator, const GanConfig& cfg,
                     const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["magic"] = "SRGANCK1";
  j["config"] = config_to_json(cfg);
  j["channels"] = generator.channels();
  j["input_width"] = generator.input_width();
  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  std::vector<ParamRef> params = generator.params();
  std::size_t total = 0;
  for (const ParamRef& p : params) {
    nlohmann::ordered_json e;
    e["name"] = p.name;
    e["count"] = p.value->size();
    manifest.push_back(std::move(e));
    total += p.value->size();
  }
  j["manifest"] = std::move(manifest);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("checkpoint: cannot open for writing: " + path.string());
  out << j.dump() << '\n';
  std::vector<float> payload;
  payload.reserve(total);
  for (const ParamRef& p : params) {
    for (double v : *p.value) payload.push_back(static_cast<float>(v));
  }
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!out) throw_data("checkpoint: write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("checkpoint: cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw_data("checkpoint: missing header");
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || j.value("magic", "") != std::string("SRGANCK1")) {
    throw_data("checkpoint: malformed header: " + path.string());
  }
  Checkpoint ck;
  try {
    ck.config = config_from_json(j.at("config"));
    ck.channels = j.at("channels").get<int>();
    ck.input_width = j.at("input_width").get<int>();
    ck.generator = Generator(ck.channels, ck.config.hidden_features,
                             ck.config.residual_blocks,
                             ck.config.upsample_factor, ck.input_width);
    std::vector<ParamRef> params = ck.generator.params();
    const auto& manifest = j.at("manifest");
    if (manifest.size() != params.size()) {
      throw_data("checkpoint: manifest length mismatch");
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (manifest[k].at("name").get<std::string>() != params[k].name ||
          manifest[k].at("count").get<std::size_t>() !=
              params[k].value->size()) {
        throw_data("checkpoint: manifest entry mismatch at " + params[k].name);
      }
    }
    for (ParamRef& p : params) {
      std::vector<float> buf(p.value->size());
      in.read(reinterpret_cast<char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
      if (in.gcount() !=
          static_cast<std::streamsize>(buf.size() * sizeof(float))) {
        throw_data("checkpoint: payload truncated: " + path.string());
      }
      p.value->assign(buf.begin(), buf.end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw_data("checkpoint: malformed header (" + std::string(e.what()) +
               "): " + path.string());
  }
  return ck;
}

}  // namespace hrtfup::neural
