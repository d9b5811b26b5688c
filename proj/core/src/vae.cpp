#include "rq/vae.hpp"

#include <cmath>
#include <random>

#include "rq/error.hpp"

namespace rq {

void VaeShape::validate() const {
  require(bands >= 1 && base_channels >= 1 && latent_dim >= 1, ErrorCode::BadShape,
          "model sizes must be positive");
  require(levels >= 1 && levels <= 8, ErrorCode::BadShape, "levels must be in [1, 8]");
  require(kernel >= 1 && kernel % 2 == 1, ErrorCode::BadShape, "kernel size must be odd");
  const std::size_t block = std::size_t{1} << (levels + 1);
  require(rows > 0 && cols > 0 && rows % block == 0 && cols % block == 0, ErrorCode::BadShape,
          "image sides must be multiples of 2^(levels + 1)");
  require(kernel <= (rows >> levels) && kernel <= (cols >> levels), ErrorCode::BadShape,
          "kernel larger than the coarsest feature map");
}

std::size_t VaeShape::channels(int i) const {
  if (i == 0) return bands;
  return base_channels << (i - 1);
}

std::size_t VaeShape::decoder_channels(int i) const {
  return i == 1 ? base_channels : channels(i - 1);
}

std::size_t VaeShape::bottom_size() const {
  return bottom_rows() * bottom_cols() * channels(levels);
}

namespace {

VaeModel allocate(const VaeShape& shape) {
  shape.validate();
  VaeModel m;
  m.shape = shape;
  const std::size_t k = shape.kernel;
  for (int i = 1; i <= shape.levels; ++i) {
    const std::size_t c = shape.channels(i), out = shape.decoder_channels(i);
    m.enc_first.emplace_back(c, shape.channels(i - 1), k);
    m.enc_second.emplace_back(c, c, k);
    m.enc_norm.emplace_back(c);
    m.dec_norm.emplace_back(c);
    m.dec_first.emplace_back(out, 2 * c, k);
    m.dec_second.emplace_back(out, out, k);
  }
  const std::size_t flat = shape.bottom_size();
  m.to_mean = Affine(shape.latent_dim, flat);
  m.to_log_variance = Affine(shape.latent_dim, flat);
  m.from_latent = Affine(flat, shape.latent_dim);
  m.head = ConvLayer(shape.bands, shape.base_channels, k);
  if (shape.classes > 0) m.seg_head = ConvLayer(shape.classes, shape.bands, k);
  return m;
}

template <typename Model, typename Span, typename Fn>
void visit(Model& m, bool states, const Fn& fn) {
  auto conv = [&](const std::string& name, auto& layer) {
    fn(name + ".w", Span(layer.kernels.weights));
    fn(name + ".b", Span(layer.bias));
  };
  auto affine = [&](const std::string& name, auto& a) {
    fn(name + ".w", Span(a.weight.data(), static_cast<std::size_t>(a.weight.size())));
    fn(name + ".b", Span(a.bias.data(), static_cast<std::size_t>(a.bias.size())));
  };
  auto norm = [&](const std::string& name, auto& bn) {
    if (states) {
      fn(name + ".mean", Span(bn.running_mean));
      fn(name + ".var", Span(bn.running_var));
    } else {
      fn(name + ".scale", Span(bn.scale));
      fn(name + ".shift", Span(bn.shift));
    }
  };
  for (std::size_t i = 0; i < m.enc_first.size(); ++i) {
    const std::string s = std::to_string(i + 1);
    if (!states) {
      conv("enc" + s + ".first", m.enc_first[i]);
      conv("enc" + s + ".second", m.enc_second[i]);
    }
    norm("enc" + s + ".norm", m.enc_norm[i]);
  }
  if (!states) {
    affine("latent.mean", m.to_mean);
    affine("latent.logvar", m.to_log_variance);
    affine("latent.decode", m.from_latent);
  }
  for (std::size_t i = 0; i < m.dec_first.size(); ++i) {
    const std::string s = std::to_string(i + 1);
    norm("dec" + s + ".norm", m.dec_norm[i]);
    if (!states) {
      conv("dec" + s + ".first", m.dec_first[i]);
      conv("dec" + s + ".second", m.dec_second[i]);
    }
  }
  if (!states) {
    conv("head", m.head);
    if (m.shape.classes > 0) conv("seg_head", m.seg_head);
  }
}

void check_finite(double v, const char* what) {
  require(std::isfinite(v), ErrorCode::DivergedLoss, std::string("non-finite ") + what);
}

}  // namespace

VaeModel VaeModel::zeros_like() const {
  VaeModel z = allocate(shape);
  z.sigma = sigma;
  for_each_parameter(z, [](const std::string&, std::span<double> v) {
    std::fill(v.begin(), v.end(), 0.0);
  });
  for_each_state(z, [](const std::string&, std::span<double> v) {
    std::fill(v.begin(), v.end(), 0.0);
  });
  return z;
}

std::size_t VaeModel::parameter_count() const {
  std::size_t n = 0;
  for_each_parameter(*this, [&](const std::string&, std::span<const double> v) { n += v.size(); });
  return n;
}

VaeModel make_vae(const VaeShape& shape, std::uint64_t seed, double sigma) {
  require(sigma > 0.0, ErrorCode::NonPositiveSigma, "observation sigma must be positive");
  VaeModel m = allocate(shape);
  m.sigma = sigma;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < shape.levels; ++i) {
    m.enc_first[i].init(rng);
    m.enc_second[i].init(rng);
  }
  m.to_mean.init(rng);
  m.to_log_variance.init(rng);
  m.from_latent.init(rng);
  for (int i = 0; i < shape.levels; ++i) {
    m.dec_first[i].init(rng);
    m.dec_second[i].init(rng);
  }
  m.head.init(rng);
  if (shape.classes > 0) m.seg_head.init(rng);
  return m;
}

void for_each_parameter(VaeModel& model,
                        const std::function<void(const std::string&, std::span<double>)>& fn) {
  visit<VaeModel, std::span<double>>(model, false, fn);
}

void for_each_parameter(const VaeModel& model,
                        const std::function<void(const std::string&, std::span<const double>)>& fn) {
  visit<const VaeModel, std::span<const double>>(model, false, fn);
}

void for_each_state(VaeModel& model,
                    const std::function<void(const std::string&, std::span<double>)>& fn) {
  visit<VaeModel, std::span<double>>(model, true, fn);
}

namespace {

Batch normalize(const BatchNorm& bn, const Batch& x, NormMode mode, BatchNorm::Cache& cache) {
  if (mode == NormMode::Batch) return bn.forward_train(x, cache);
  Batch y;
  for (const auto& s : x) y.push_back(bn.forward_eval(s));
  return y;
}

}  // namespace

void encode_pass(const VaeModel& model, const Batch& f, NormMode mode, ForwardPass& pass) {
  const VaeShape& sh = model.shape;
  require(!f.empty(), ErrorCode::BadShape, "empty batch");
  for (const auto& img : f)
    require(img.band_count() == sh.bands && img.rows() == sh.rows && img.cols() == sh.cols,
            ErrorCode::BadShape, "input does not match the model shape");
  pass = ForwardPass{};
  pass.mode = mode;
  Batch x = f;
  for (int i = 0; i < sh.levels; ++i) {
    EncoderStage st;
    st.input = std::move(x);
    for (const auto& s : st.input) {
      MultiBandImage h1 = model.enc_first[i].forward(s);
      relu_inplace(h1);
      MultiBandImage h2 = model.enc_second[i].forward(h1);
      relu_inplace(h2);
      st.h1.push_back(std::move(h1));
      st.h2.push_back(std::move(h2));
    }
    st.skip = normalize(model.enc_norm[i], st.h2, mode, st.norm);
    x.clear();
    for (const auto& c : st.skip) x.push_back(mean_pool(c));
    pass.enc.push_back(std::move(st));
  }
  pass.bottom = std::move(x);
  for (const auto& b : pass.bottom) {
    pass.flat.push_back(flatten(b));
    pass.mean.push_back(model.to_mean.forward(pass.flat.back()));
    pass.log_variance.push_back(model.to_log_variance.forward(pass.flat.back()));
  }
}

void decode_pass(const VaeModel& model, const std::vector<Eigen::VectorXd>& eps, ForwardPass& pass,
                 bool with_logits) {
  const VaeShape& sh = model.shape;
  const std::size_t B = pass.mean.size();
  require(eps.size() == B, ErrorCode::BadShape, "one epsilon vector per image is required");
  pass.eps = eps;
  pass.z.clear();
  pass.top.clear();
  pass.dec.assign(static_cast<std::size_t>(sh.levels), DecoderStage{});
  for (std::size_t s = 0; s < B; ++s) {
    require(static_cast<std::size_t>(eps[s].size()) == sh.latent_dim, ErrorCode::BadShape,
            "epsilon has the wrong length");
    pass.z.push_back(pass.mean[s] +
                     (0.5 * pass.log_variance[s].array()).exp().matrix().cwiseProduct(eps[s]));
    pass.top.push_back(unflatten(model.from_latent.forward(pass.z.back()), sh.channels(sh.levels),
                                 sh.bottom_rows(), sh.bottom_cols()));
  }
  const Batch* low = &pass.top;
  for (int i = sh.levels - 1; i >= 0; --i) {
    DecoderStage& st = pass.dec[static_cast<std::size_t>(i)];
    const EncoderStage& enc = pass.enc[static_cast<std::size_t>(i)];
    for (const auto& s : *low) st.up.push_back(unpool(s));
    const Batch normed = normalize(model.dec_norm[i], st.up, pass.mode, st.norm);
    for (std::size_t s = 0; s < B; ++s) {
      require(enc.skip[s].band_count() == sh.channels(i + 1) &&
                  enc.skip[s].rows() == normed[s].rows() && enc.skip[s].cols() == normed[s].cols(),
              ErrorCode::BadShape, "skip plane does not match the decoder stage");
      st.joined.push_back(concat_bands(enc.skip[s], normed[s]));
      MultiBandImage g1 = model.dec_first[i].forward(st.joined.back());
      relu_inplace(g1);
      MultiBandImage g2 = model.dec_second[i].forward(g1);
      relu_inplace(g2);
      st.g1.push_back(std::move(g1));
      st.g2.push_back(std::move(g2));
    }
    low = &st.g2;
  }
  pass.output.clear();
  pass.logits.clear();
  for (const auto& s : *low) {
    MultiBandImage out = model.head.forward(s);
    relu_inplace(out);
    pass.output.push_back(std::move(out));
  }
  if (with_logits) {
    require(sh.classes > 0, ErrorCode::InvalidArgument, "model has no segmentation head");
    for (const auto& out : pass.output) pass.logits.push_back(model.seg_head.forward(out));
  }
}

void backward_pass(const VaeModel& model, const ForwardPass& pass, const PassGradient& g,
                   VaeModel& grad) {
  require(pass.mode == NormMode::Batch, ErrorCode::InvalidArgument,
          "gradients are defined for batch-mode passes only");
  const VaeShape& sh = model.shape;
  const std::size_t B = pass.output.size();
  const int I = sh.levels;

  // Head.
  Batch d_low(B);
  for (std::size_t s = 0; s < B; ++s) {
    MultiBandImage d_out = g.d_logits.empty()
                               ? g.d_output[s]
                               : model.seg_head.backward(pass.output[s], g.d_logits[s], grad.seg_head);
    if (!g.d_logits.empty() && !g.d_output.empty()) d_out += g.d_output[s];
    d_out = relu_backward(pass.output[s], std::move(d_out));
    d_low[s] = model.head.backward(pass.dec[0].g2[s], d_out, grad.head);
  }

  // Decoder, stage 1 up to stage I.
  std::vector<Batch> d_skip(static_cast<std::size_t>(I));
  for (int i = 0; i < I; ++i) {
    const DecoderStage& st = pass.dec[static_cast<std::size_t>(i)];
    Batch d_normed(B);
    for (std::size_t s = 0; s < B; ++s) {
      MultiBandImage d = relu_backward(st.g2[s], std::move(d_low[s]));
      d = model.dec_second[i].backward(st.g1[s], d, grad.dec_second[i]);
      d = relu_backward(st.g1[s], std::move(d));
      d = model.dec_first[i].backward(st.joined[s], d, grad.dec_first[i]);
      auto [ds, dn] = split_bands(d, sh.channels(i + 1));
      d_skip[static_cast<std::size_t>(i)].push_back(std::move(ds));
      d_normed[s] = std::move(dn);
    }
    const Batch d_up = model.dec_norm[i].backward(st.norm, d_normed, grad.dec_norm[i]);
    for (std::size_t s = 0; s < B; ++s) d_low[s] = unpool_backward(d_up[s]);
  }

  // Latent maps and reparameterization.
  Batch d_next(B);
  for (std::size_t s = 0; s < B; ++s) {
    const Eigen::VectorXd d_top = flatten(d_low[s]);
    const Eigen::VectorXd d_z = model.from_latent.backward(pass.z[s], d_top, grad.from_latent);
    const Eigen::VectorXd half_sd = 0.5 * (0.5 * pass.log_variance[s].array()).exp().matrix();
    Eigen::VectorXd d_mean = d_z, d_lv = d_z.cwiseProduct(pass.eps[s]).cwiseProduct(half_sd);
    if (!g.d_mean.empty()) d_mean += g.d_mean[s];
    if (!g.d_log_variance.empty()) d_lv += g.d_log_variance[s];
    Eigen::VectorXd d_flat = model.to_mean.backward(pass.flat[s], d_mean, grad.to_mean);
    d_flat += model.to_log_variance.backward(pass.flat[s], d_lv, grad.to_log_variance);
    d_next[s] = unflatten(d_flat, sh.channels(I), sh.bottom_rows(), sh.bottom_cols());
  }

  // Encoder, stage I down to stage 1.
  for (int i = I - 1; i >= 0; --i) {
    const EncoderStage& st = pass.enc[static_cast<std::size_t>(i)];
    Batch d_skip_total(B);
    for (std::size_t s = 0; s < B; ++s) {
      d_skip_total[s] = mean_pool_backward(d_next[s]);
      d_skip_total[s] += d_skip[static_cast<std::size_t>(i)][s];
    }
    const Batch d_h2 = model.enc_norm[i].backward(st.norm, d_skip_total, grad.enc_norm[i]);
    for (std::size_t s = 0; s < B; ++s) {
      MultiBandImage d = relu_backward(st.h2[s], d_h2[s]);
      d = model.enc_second[i].backward(st.h1[s], d, grad.enc_second[i]);
      d = relu_backward(st.h1[s], std::move(d));
      if (i > 0) {
        d_next[s] = model.enc_first[i].backward(st.input[s], d, grad.enc_first[i]);
      } else {
        ConvLayer& gl = grad.enc_first[i];
        const KernelFamily gk = conv_iso_kernel_grad(st.input[s], d, model.enc_first[i].kernels);
        for (std::size_t k = 0; k < gk.weights.size(); ++k) gl.kernels.weights[k] += gk.weights[k];
        for (std::size_t q = 0; q < d.band_count(); ++q)
          for (double v : d[q].values()) gl.bias[q] += v;
      }
    }
  }
}

Encoding encode(const VaeModel& model, const MultiBandImage& f) {
  ForwardPass pass;
  encode_pass(model, {f}, NormMode::Running, pass);
  Encoding out;
  for (auto& st : pass.enc) out.skips.push_back(std::move(st.skip[0]));
  out.mean = pass.mean[0];
  out.log_variance = pass.log_variance[0];
  return out;
}

Eigen::VectorXd standard_normal(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd e(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = normal(rng);
  return e;
}

LatentSample reparameterize(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_variance,
                            std::uint64_t seed) {
  require(mean.size() == log_variance.size(), ErrorCode::DimensionMismatch,
          "mean and log-variance lengths differ");
  LatentSample s{mean, mean, log_variance, seed};
  const Eigen::VectorXd eps = standard_normal(static_cast<std::size_t>(mean.size()), seed);
  s.z += (0.5 * log_variance.array()).exp().matrix().cwiseProduct(eps);
  return s;
}

MultiBandImage decode(const VaeModel& model, const std::vector<MultiBandImage>& skips,
                      const Eigen::VectorXd& z) {
  const VaeShape& sh = model.shape;
  require(skips.size() == static_cast<std::size_t>(sh.levels), ErrorCode::BadShape,
          "one skip plane set per scale is required");
  require(static_cast<std::size_t>(z.size()) == sh.latent_dim, ErrorCode::BadShape,
          "latent vector has the wrong length");
  // A zero-variance pass with mean z decodes z itself.
  ForwardPass pass;
  pass.mode = NormMode::Running;
  for (const auto& c : skips) {
    EncoderStage st;
    st.skip = {c};
    pass.enc.push_back(std::move(st));
  }
  pass.mean = {z};
  pass.log_variance = {Eigen::VectorXd::Zero(z.size())};
  decode_pass(model, {Eigen::VectorXd::Zero(z.size())}, pass);
  return std::move(pass.output[0]);
}

double kl_divergence(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_variance) {
  require(mean.size() == log_variance.size(), ErrorCode::DimensionMismatch,
          "mean and log-variance lengths differ");
  const double d = static_cast<double>(mean.size());
  return 0.5 * (mean.squaredNorm() - d + (log_variance.array().exp() - log_variance.array()).sum());
}

ElboTerms elbo_loss(const VaeModel& model, const Batch& f, const std::vector<Eigen::VectorXd>& eps,
                    VaeModel* grad, ForwardPass* pass_out) {
  require(model.sigma > 0.0, ErrorCode::NonPositiveSigma, "observation sigma must be positive");
  ForwardPass pass;
  encode_pass(model, f, NormMode::Batch, pass);
  decode_pass(model, eps, pass);
  const std::size_t B = f.size();
  const double inv_b = 1.0 / static_cast<double>(B);
  const double w = 1.0 / (2.0 * model.sigma * model.sigma);
  ElboTerms t;
  PassGradient g;
  for (std::size_t s = 0; s < B; ++s) {
    MultiBandImage diff = pass.output[s] - f[s];
    const double sq = diff.sum_squares();
    t.mse += sq / static_cast<double>(diff.size());
    t.recon += w * sq;
    t.kl += kl_divergence(pass.mean[s], pass.log_variance[s]);
    if (grad) {
      diff *= 2.0 * w * inv_b;
      g.d_output.push_back(std::move(diff));
      g.d_mean.push_back(pass.mean[s] * inv_b);
      g.d_log_variance.push_back(0.5 * inv_b * (pass.log_variance[s].array().exp() - 1.0).matrix());
    }
  }
  t.recon *= inv_b;
  t.kl *= inv_b;
  t.mse *= inv_b;
  t.total = t.recon + t.kl;
  check_finite(t.total, "ELBO loss");
  if (grad) backward_pass(model, pass, g, *grad);
  if (pass_out) *pass_out = std::move(pass);
  return t;
}

void update_running_stats(VaeModel& model, const ForwardPass& pass) {
  require(pass.mode == NormMode::Batch, ErrorCode::InvalidArgument,
          "running statistics come from batch-mode passes");
  for (std::size_t i = 0; i < pass.enc.size(); ++i) model.enc_norm[i].update_running(pass.enc[i].norm);
  for (std::size_t i = 0; i < pass.dec.size(); ++i) model.dec_norm[i].update_running(pass.dec[i].norm);
}

}  // namespace rq
