// core/src/model.cpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "wsci/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "text_format.hpp"

namespace wsci {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

/// Stable log-softmax of z^T A.
Eigen::VectorXd semantic_log_probs(const Eigen::VectorXd &z,
                                   const Eigen::MatrixXd &A) {
  if (z.size() != A.rows())
    throw ShapeError("latent dimension " + std::to_string(z.size()) +
                     " does not match semantic matrix rows " +
                     std::to_string(A.rows()));
  Eigen::VectorXd logits = A.transpose() * z;
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits.array() - lse;
}

WsciConfig resolved(WsciConfig cfg) {
  cfg.hidden = cfg.resolved_hidden();
  cfg.validate();
  return cfg;
}

}  // namespace

int WsciConfig::resolved_hidden() const {
  if (hidden > 0) return hidden;
  return static_cast<int>(std::lround((d + m) / 2.0));
}

void WsciConfig::validate() const {
  if (d < 1) throw ConfigError("d must be >= 1");
  if (m < 1) throw ConfigError("m must be >= 1");
  if (C < 1) throw ConfigError("C must be >= 1");
  if (resolved_hidden() < 1) throw ConfigError("hidden must be >= 1");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (l_predict < 1) throw ConfigError("l_predict must be >= 1");
  if (batch < 1) throw ConfigError("batch must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(base_rate > 0.0)) throw ConfigError("base_rate must be > 0");
  if (!(rate_decay > 0.0)) throw ConfigError("rate_decay must be > 0");
}

LatentSample reparameterize(const GaussianPosterior &q,
                            const Eigen::VectorXd &eps) {
  if (eps.size() != q.mu.size())
    throw ShapeError("eps length does not match the posterior dimension");
  LatentSample s;
  s.eps = eps;
  s.z = q.mu + q.sigma().cwiseProduct(eps);
  return s;
}

double recon_log_density(const Eigen::VectorXd &x, const DecoderOutput &out) {
  if (x.size() != out.mu_x.size())
    throw ShapeError("x and mu_x lengths differ");
  const double d = static_cast<double>(x.size());
  return -0.5 * d * kLog2Pi - 0.5 * (x - out.mu_x).squaredNorm();
}

double kl_standard_normal(const GaussianPosterior &q) {
  if (q.mu.size() != q.log_var.size())
    throw ShapeError("mu and log_var lengths differ");
  if (!q.log_var.allFinite() || !q.mu.allFinite())
    throw DomainError("posterior parameters must be finite");
  const Eigen::ArrayXd var = q.log_var.array().exp();
  return 0.5 * (q.mu.array().square() + var - 1.0 - q.log_var.array()).sum();
}

Eigen::VectorXd semantic_class_probs(const Eigen::VectorXd &z,
                                     const Eigen::MatrixXd &A) {
  return semantic_log_probs(z, A).array().exp();
}

BatchWeights normalize_batch_weights(const Eigen::VectorXd &log_p) {
  if (log_p.size() < 1)
    throw DomainError("cannot normalize weights of an empty batch");
  BatchWeights bw;
  bw.log_p = log_p;
  const double m = log_p.maxCoeff();
  bw.tilde_p = (log_p.array() - m)
                   .exp()
                   .cwiseMax(std::numeric_limits<double>::min());
  return bw;
}

WsciModel::WsciModel(const WsciConfig &config)
    : cfg_(resolved(config)),
      enc_hidden_(store_, "enc.hidden", cfg_.d, cfg_.hidden, Activation::kTanh),
      enc_mu_(store_, "enc.mu", cfg_.hidden, cfg_.m, Activation::kIdentity),
      enc_log_var_(store_, "enc.logvar", cfg_.hidden, cfg_.m,
                   Activation::kIdentity),
      dec_hidden_(store_, "dec.hidden", cfg_.m, cfg_.hidden, Activation::kTanh),
      dec_out_(store_, "dec.out", cfg_.hidden, cfg_.d, Activation::kIdentity) {
  std::mt19937_64 rng(mix_seed(cfg_.seed, 0x1717u));
  init_params(store_, rng);
}

GaussianPosterior WsciModel::encode(const Eigen::VectorXd &x) const {
  ForwardCaches fc;
  return encode(x, fc);
}

GaussianPosterior WsciModel::encode(const Eigen::VectorXd &x,
                                    ForwardCaches &fc) const {
  const Eigen::VectorXd h = enc_hidden_.forward(store_, x, fc.enc_hidden);
  GaussianPosterior q;
  q.mu = enc_mu_.forward(store_, h, fc.enc_mu);
  q.log_var = enc_log_var_.forward(store_, h, fc.enc_log_var);
  return q;
}

DecoderOutput WsciModel::decode(const Eigen::VectorXd &z) const {
  ForwardCaches fc;
  return decode(z, fc);
}

DecoderOutput WsciModel::decode(const Eigen::VectorXd &z,
                                ForwardCaches &fc) const {
  const Eigen::VectorXd h = dec_hidden_.forward(store_, z, fc.dec_hidden);
  DecoderOutput out;
  out.mu_x = dec_out_.forward(store_, h, fc.dec_out);
  return out;
}

double WsciModel::semantic_vae_loss(const Eigen::VectorXd &x, int label,
                                    const Eigen::VectorXd &z,
                                    const Eigen::MatrixXd &A) const {
  if (label < 0 || label >= cfg_.C)
    throw DomainError("label " + std::to_string(label + 1) +
                      " outside 1.." + std::to_string(cfg_.C));
  const Eigen::VectorXd log_probs = semantic_log_probs(z, A);
  return -log_probs[label] - recon_log_density(x, decode(z));
}

void WsciModel::backward_through_encoder(const Eigen::VectorXd &dz,
                                         const Eigen::VectorXd &eps,
                                         const GaussianPosterior &q,
                                         ForwardCaches &fc) {
  // z = mu + exp(log_var / 2) o eps
  backward_encoder_heads(dz, 0.5 * dz.cwiseProduct(eps).cwiseProduct(q.sigma()),
                         fc);
}

void WsciModel::backward_encoder_heads(const Eigen::VectorXd &dmu,
                                       const Eigen::VectorXd &dlog_var,
                                       ForwardCaches &fc) {
  const Eigen::VectorXd dh = enc_mu_.backward(store_, dmu, fc.enc_mu) +
                             enc_log_var_.backward(store_, dlog_var,
                                                   fc.enc_log_var);
  enc_hidden_.backward(store_, dh, fc.enc_hidden);
}

Eigen::VectorXd WsciModel::backward_through_decoder(
    const Eigen::VectorXd &dmu_x, ForwardCaches &fc) {
  const Eigen::VectorXd dh = dec_out_.backward(store_, dmu_x, fc.dec_out);
  return dec_hidden_.backward(store_, dh, fc.dec_hidden);
}

BatchLossResult wsci_batch_loss(WsciModel &model,
                                std::span<const Instance> batch,
                                std::span<const Eigen::VectorXd> eps,
                                const Eigen::MatrixXd &A, double lambda,
                                const Eigen::VectorXd *pinned_weights,
                                bool accumulate_grads) {
  const int n = static_cast<int>(batch.size());
  if (n == 0) throw DomainError("empty batch");
  if (static_cast<int>(eps.size()) != n)
    throw ShapeError("one eps draw per instance required");
  const WsciConfig &cfg = model.config();
  if (A.cols() != cfg.C)
    throw ShapeError("semantic matrix has " + std::to_string(A.cols()) +
                     " columns for C=" + std::to_string(cfg.C));
  if (pinned_weights && pinned_weights->size() != n)
    throw ShapeError("pinned weights must match the batch size");

  const double log_c = std::log(static_cast<double>(cfg.C));

  // First pass: values only.
  Eigen::VectorXd log_p(n), log_prob_label(n);
  for (int i = 0; i < n; ++i) {
    const Instance &inst = batch[i];
    if (inst.label < 0 || inst.label >= cfg.C)
      throw DomainError("label " + std::to_string(inst.label + 1) +
                        " outside 1.." + std::to_string(cfg.C));
    const GaussianPosterior q = model.encode(*inst.x);
    const LatentSample s = reparameterize(q, eps[i]);
    log_p[i] = recon_log_density(*inst.x, model.decode(s.z));
    log_prob_label[i] = semantic_log_probs(s.z, A)[inst.label];
  }

  BatchLossResult result;
  result.log_p = log_p;
  result.tilde_p =
      pinned_weights ? *pinned_weights : normalize_batch_weights(log_p).tilde_p;
  result.loss = 0.0;
  for (int i = 0; i < n; ++i)
    result.loss += -result.tilde_p[i] * (log_prob_label[i] + log_c) -
                   lambda * log_p[i];

  if (!accumulate_grads) return result;

  // Second pass: re-run each instance's forward to populate caches, then
  // backpropagate with its weight held constant.
  for (int i = 0; i < n; ++i) {
    const Instance &inst = batch[i];
    ForwardCaches fc;
    const GaussianPosterior q = model.encode(*inst.x, fc);
    const LatentSample s = reparameterize(q, eps[i]);
    const Eigen::VectorXd probs = semantic_class_probs(s.z, A);

    Eigen::VectorXd dz =
        -result.tilde_p[i] * (A.col(inst.label) - A * probs);
    if (lambda != 0.0) {
      const DecoderOutput out = model.decode(s.z, fc);
      const Eigen::VectorXd dmu_x = -lambda * (*inst.x - out.mu_x);
      dz += model.backward_through_decoder(dmu_x, fc);
    }
    model.backward_through_encoder(dz, s.eps, q, fc);
  }
  return result;
}

TrainResult train(WsciModel &model, std::span<const Instance> data,
                  const Eigen::MatrixXd &A, TrainMode mode,
                  const EpochObserver &observer) {
  if (data.empty()) throw DomainError("empty training set");
  const WsciConfig &cfg = model.config();
  if (A.cols() != cfg.C)
    throw ConfigError("semantic matrix column count differs from C");
  if (A.rows() != cfg.m)
    throw ConfigError("semantic matrix row count differs from m");

  const double lambda = mode == TrainMode::kWsci ? cfg.lambda : 0.0;
  AdamState adam(model.params(), cfg.base_rate, cfg.rate_decay);

  const int n = static_cast<int>(data.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  result.epochs.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 2 * epoch));
    std::mt19937_64 eps_rng(mix_seed(cfg.seed, 2 * epoch + 1));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double total_loss = 0.0;
    double weight_sum = 0.0;
    for (int start = 0; start < n; start += cfg.batch) {
      const int len = std::min(cfg.batch, n - start);
      std::vector<Instance> batch(len);
      std::vector<Eigen::VectorXd> eps(len);
      for (int i = 0; i < len; ++i) {
        batch[i] = data[order[start + i]];
        eps[i] = Eigen::VectorXd::NullaryExpr(
            cfg.m, [&](Eigen::Index) { return normal(eps_rng); });
      }
      Eigen::VectorXd ones;
      const Eigen::VectorXd *pinned = nullptr;
      if (mode == TrainMode::kUnweighted) {
        ones = Eigen::VectorXd::Ones(len);
        pinned = &ones;
      }
      const BatchLossResult r =
          wsci_batch_loss(model, batch, eps, A, lambda, pinned, true);
      adam_update(adam, model.params(), epoch);
      total_loss += r.loss;
      weight_sum += r.tilde_p.sum();
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.total_loss = total_loss;
    stats.mean_tilde_p = weight_sum / n;
    stats.learning_rate = adam.effective_rate(epoch);
    result.epochs.push_back(stats);
    if (observer) observer(stats, model);
  }
  return result;
}

Eigen::VectorXd predict(const WsciModel &model, const Eigen::VectorXd &x,
                        const Eigen::MatrixXd &A, int L,
                        std::mt19937_64 &rng) {
  if (L < 1) throw DomainError("L must be >= 1");
  const GaussianPosterior q = model.encode(x);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(A.cols());
  for (int l = 0; l < L; ++l) {
    const Eigen::VectorXd eps = Eigen::VectorXd::NullaryExpr(
        q.mu.size(), [&](Eigen::Index) { return normal(rng); });
    mean += semantic_class_probs(reparameterize(q, eps).z, A);
  }
  return mean / static_cast<double>(L);
}

std::vector<Eigen::VectorXd> predict_dataset(const WsciModel &model,
                                             std::span<const Instance> data,
                                             const Eigen::MatrixXd &A, int L,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(data.size());
  for (const Instance &inst : data)
    out.push_back(predict(model, *inst.x, A, L, rng));
  return out;
}

Eigen::VectorXd outlier_scores(const WsciModel &model,
                               std::span<const Instance> data) {
  if (data.empty()) throw DomainError("empty evaluation batch");
  Eigen::VectorXd log_p(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const GaussianPosterior q = model.encode(*data[i].x);
    log_p[static_cast<Eigen::Index>(i)] =
        recon_log_density(*data[i].x, model.decode(q.mu));
  }
  return normalize_batch_weights(log_p).tilde_p;
}

void save_checkpoint(const WsciModel &model, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  const WsciConfig &cfg = model.config();
  out << "wsci-checkpoint"
      << " d=" << cfg.d << " m=" << cfg.m << " C=" << cfg.C
      << " hidden=" << cfg.hidden
      << " lambda=" << detail::fmt_double(cfg.lambda)
      << " l_predict=" << cfg.l_predict << " batch=" << cfg.batch
      << " epochs=" << cfg.epochs << " seed=" << cfg.seed
      << " base_rate=" << detail::fmt_double(cfg.base_rate)
      << " rate_decay=" << detail::fmt_double(cfg.rate_decay) << "\n";
  model.params().save(out);
}

WsciModel load_checkpoint(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty checkpoint", 1);
  std::istringstream hs(line);
  std::string magic, tok;
  hs >> magic;
  if (magic != "wsci-checkpoint")
    throw ParseError("missing 'wsci-checkpoint' magic", 1);
  WsciConfig cfg;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw ParseError("bad checkpoint header token '" + tok + "'", 1);
    const std::string key = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    double dv = 0;
    int iv = 0;
    if (key == "lambda" && detail::parse_double(value, &dv)) cfg.lambda = dv;
    else if (key == "base_rate" && detail::parse_double(value, &dv))
      cfg.base_rate = dv;
    else if (key == "rate_decay" && detail::parse_double(value, &dv))
      cfg.rate_decay = dv;
    else if (key == "seed")
      cfg.seed = std::strtoull(value.c_str(), nullptr, 10);
    else if (detail::parse_int(value, &iv)) {
      if (key == "d") cfg.d = iv;
      else if (key == "m") cfg.m = iv;
      else if (key == "C") cfg.C = iv;
      else if (key == "hidden") cfg.hidden = iv;
      else if (key == "l_predict") cfg.l_predict = iv;
      else if (key == "batch") cfg.batch = iv;
      else if (key == "epochs") cfg.epochs = iv;
      else throw ParseError("unknown checkpoint key '" + key + "'", 1);
    } else {
      throw ParseError("bad checkpoint header token '" + tok + "'", 1);
    }
  }
  WsciModel model(cfg);
  model.params().load(in);
  return model;
}

}  // namespace wsci
