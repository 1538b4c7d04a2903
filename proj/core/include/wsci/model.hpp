// core/include/wsci/model.hpp

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

#ifndef WSCI_MODEL_HPP_
#define WSCI_MODEL_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wsci/data.hpp"
#include "wsci/errors.hpp"
#include "wsci/nn.hpp"

namespace wsci {

struct WsciConfig {
  int d = 0;  // feature dimension
  int m = 0;  // semantic dimension
  int C = 0;  // category count
  int hidden = 0;  // 0 resolves to round((d+m)/2)
  double lambda = 1e-4;  // reconstruction trade-off
  int l_predict = 5;
  int batch = 64;
  int epochs = 50;
  std::uint64_t seed = 1;
  double base_rate = 1e-3;
  double rate_decay = 0.95;

  int resolved_hidden() const;
  void validate() const;
};

/// Encoder output q(z|x) = N(mu, diag sigma^2); the variance is carried as
/// log sigma^2 so sigma stays positive by construction.
struct GaussianPosterior {
  Eigen::VectorXd mu;
  Eigen::VectorXd log_var;

  Eigen::VectorXd sigma() const { return (0.5 * log_var.array()).exp(); }
};

struct LatentSample {
  Eigen::VectorXd z;
  Eigen::VectorXd eps;
};

/// Decoder output; sigma_x is pinned to all-ones and never learned.
struct DecoderOutput {
  Eigen::VectorXd mu_x;
};

struct BatchWeights {
  Eigen::VectorXd log_p;
  Eigen::VectorXd tilde_p;  // in (0, 1], max exactly 1
};

/// z = mu + sigma o eps
LatentSample reparameterize(const GaussianPosterior &q,
                            const Eigen::VectorXd &eps);

/// log N(x; mu_x, I) = -(d/2) log(2 pi) - ||x - mu_x||^2 / 2
double recon_log_density(const Eigen::VectorXd &x, const DecoderOutput &out);

/// KL[q || N(0, I)] in closed form; used by the plain-VAE ablation.
double kl_standard_normal(const GaussianPosterior &q);

/// softmax over z^T a^c with max subtraction; a point on the C-simplex.
Eigen::VectorXd semantic_class_probs(const Eigen::VectorXd &z,
                                     const Eigen::MatrixXd &A);

/// Per-batch max normalization of reconstruction log-densities. Values are
/// clamped to the smallest positive double so they stay inside (0, 1].
BatchWeights normalize_batch_weights(const Eigen::VectorXd &log_p);

/// Scratch for one instance's forward pass; lets const models serve
/// concurrent callers.
struct ForwardCaches {
  LayerCache enc_hidden, enc_mu, enc_log_var, dec_hidden, dec_out;
};

/// The WSCI network: probabilistic encoder/decoder MLPs with a semantic
/// classifier softmax(z^T A) attached to the latent layer.
class WsciModel {
 public:
  explicit WsciModel(const WsciConfig &config);

  const WsciConfig &config() const { return cfg_; }
  ParamStore &params() { return store_; }
  const ParamStore &params() const { return store_; }

  GaussianPosterior encode(const Eigen::VectorXd &x) const;
  GaussianPosterior encode(const Eigen::VectorXd &x, ForwardCaches &fc) const;
  DecoderOutput decode(const Eigen::VectorXd &z) const;
  DecoderOutput decode(const Eigen::VectorXd &z, ForwardCaches &fc) const;

  /// Loss of the semantic VAE for one instance at a given latent:
  /// -log p(y=c|z) - log p(x|z).
  double semantic_vae_loss(const Eigen::VectorXd &x, int label,
                           const Eigen::VectorXd &z,
                           const Eigen::MatrixXd &A) const;

  /// Backpropagates dL/dz through the sampling step into the encoder
  /// parameters. The caches must come from encode() on the same instance.
  void backward_through_encoder(const Eigen::VectorXd &dz,
                                const Eigen::VectorXd &eps,
                                const GaussianPosterior &q, ForwardCaches &fc);
  /// Backpropagates gradients that land directly on mu and log sigma^2
  /// (e.g. a KL term) into the encoder parameters.
  void backward_encoder_heads(const Eigen::VectorXd &dmu,
                              const Eigen::VectorXd &dlog_var,
                              ForwardCaches &fc);
  /// Backpropagates dL/dmu_x into the decoder parameters and returns dL/dz.
  Eigen::VectorXd backward_through_decoder(const Eigen::VectorXd &dmu_x,
                                           ForwardCaches &fc);

 private:
  WsciConfig cfg_;
  ParamStore store_;
  DenseLayer enc_hidden_, enc_mu_, enc_log_var_, dec_hidden_, dec_out_;
};

struct BatchLossResult {
  double loss = 0.0;
  Eigen::VectorXd tilde_p;  // the weights the loss actually used
  Eigen::VectorXd log_p;
};

/// The training objective over one mini-batch:
///   sum_i [ -p~_i (log p(y_i = c_i | x_i) + log C) - lambda log p(x_i|z_i) ]
/// with one latent sample per instance. The weights p~ are the batch-max
/// normalized reconstruction densities and act as constants in the gradient
/// (no gradient flows through the weight factor); pass `pinned_weights` to
/// substitute fixed weights (all-ones for the unweighted baseline, or a base
/// point's weights when checking gradients by finite differences).
BatchLossResult wsci_batch_loss(WsciModel &model,
                                std::span<const Instance> batch,
                                std::span<const Eigen::VectorXd> eps,
                                const Eigen::MatrixXd &A, double lambda,
                                const Eigen::VectorXd *pinned_weights,
                                bool accumulate_grads);

enum class TrainMode { kWsci, kUnweighted };

struct EpochStats {
  int epoch = 0;
  double total_loss = 0.0;
  double mean_tilde_p = 0.0;
  double learning_rate = 0.0;
};

using EpochObserver =
    std::function<void(const EpochStats &, const WsciModel &)>;

struct TrainResult {
  std::vector<EpochStats> epochs;
};

/// Shuffled mini-batch training with Adam and per-epoch rate decay; one
/// fresh eps draw per instance per epoch. Deterministic under the config
/// seed. kUnweighted pins every weight to 1 and drops the reconstruction
/// term (lambda = 0), which reduces the objective to a plain softmax loss.
TrainResult train(WsciModel &model, std::span<const Instance> data,
                  const Eigen::MatrixXd &A, TrainMode mode,
                  const EpochObserver &observer = {});

/// Mean of L sampled class-probability vectors.
Eigen::VectorXd predict(const WsciModel &model, const Eigen::VectorXd &x,
                        const Eigen::MatrixXd &A, int L, std::mt19937_64 &rng);

/// predict() for every instance with draws derived from one seed.
std::vector<Eigen::VectorXd> predict_dataset(const WsciModel &model,
                                             std::span<const Instance> data,
                                             const Eigen::MatrixXd &A, int L,
                                             std::uint64_t seed);

/// Normalized reconstruction densities p~ at the posterior mean (eps = 0),
/// treating the whole input as one evaluation batch. Higher means more
/// non-outlier-like.
Eigen::VectorXd outlier_scores(const WsciModel &model,
                               std::span<const Instance> data);

void save_checkpoint(const WsciModel &model, const std::string &path);
WsciModel load_checkpoint(const std::string &path);

}  // namespace wsci

#endif  // WSCI_MODEL_HPP_
