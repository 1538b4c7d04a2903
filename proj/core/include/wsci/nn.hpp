// core/include/wsci/nn.hpp

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

#ifndef WSCI_NN_HPP_
#define WSCI_NN_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "wsci/errors.hpp"

namespace wsci {

enum class Activation { kIdentity, kTanh, kRelu };

Eigen::VectorXd apply_activation(Activation act, const Eigen::VectorXd &preact);
/// Derivative of the activation evaluated at a pre-activation vector.
Eigen::VectorXd activation_grad(Activation act, const Eigen::VectorXd &preact);

/// One named parameter array with its gradient accumulator.
struct Param {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;
};

/// Ordered, uniquely-named parameter arrays. Gradients always share the
/// shape of their parameter.
class ParamStore {
 public:
  /// Adds a zero-initialized parameter. Throws DomainError on duplicate name.
  int add(const std::string &name, int rows, int cols);

  Param &at(int index) { return params_.at(index); }
  const Param &at(int index) const { return params_.at(index); }
  int size() const { return static_cast<int>(params_.size()); }
  /// Index of the named parameter, or -1.
  int find(const std::string &name) const;

  void zero_grads();
  /// Total number of scalar parameters.
  long scalar_count() const;

  /// Text snapshot: name, shape, row-major values. Reading it back through
  /// load() reproduces the values bit-for-bit.
  void save(std::ostream &out) const;
  /// Loads a snapshot. An empty store adopts the file's layout; a populated
  /// store requires matching names and shapes. Gradients are zeroed.
  void load(std::istream &in);

 private:
  std::vector<Param> params_;
};

/// Per-layer forward state consumed by backward(). Owned by the caller so
/// that forward passes on a shared const model stay re-entrant.
struct LayerCache {
  Eigen::VectorXd input;
  Eigen::VectorXd preact;
  bool valid = false;
};

/// Affine layer y = act(W x + b) over parameters held in a ParamStore.
class DenseLayer {
 public:
  DenseLayer(ParamStore &store, const std::string &name, int in_dim,
             int out_dim, Activation act);

  Eigen::VectorXd forward(const ParamStore &store, const Eigen::VectorXd &x,
                          LayerCache &cache) const;
  /// Accumulates dL/dW and dL/db into the store and returns dL/dinput.
  /// Throws StateError if the cache was not produced by forward().
  Eigen::VectorXd backward(ParamStore &store, const Eigen::VectorXd &upstream,
                           const LayerCache &cache) const;

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  Activation activation() const { return act_; }
  int weight_index() const { return w_; }
  int bias_index() const { return b_; }

 private:
  int w_ = -1;
  int b_ = -1;
  int in_ = 0;
  int out_ = 0;
  Activation act_ = Activation::kIdentity;
};

/// Seeded symmetric init: weights uniform in +-sqrt(6/(fan_in+fan_out)),
/// biases zero. Consumes the rng in store order, row-major per matrix.
void init_params(ParamStore &store, std::mt19937_64 &rng);

/// Adam with a per-epoch exponentially decaying learning rate.
class AdamState {
 public:
  explicit AdamState(const ParamStore &store, double base_rate = 1e-3,
                     double decay = 0.95, double beta1 = 0.9,
                     double beta2 = 0.999, double epsilon = 1e-8);

  double base_rate() const { return base_rate_; }
  double decay() const { return decay_; }
  /// base * decay^epoch
  double effective_rate(int epoch) const;
  std::int64_t step() const { return step_; }

  friend void adam_update(AdamState &state, ParamStore &store, int epoch);

 private:
  double base_rate_;
  double decay_;
  double beta1_;
  double beta2_;
  double epsilon_;
  std::int64_t step_ = 0;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<Eigen::MatrixXd> v_;
};

/// One bias-corrected Adam step at rate base*decay^epoch; zeroes the
/// gradients afterwards.
void adam_update(AdamState &state, ParamStore &store, int epoch);

/// Mixes a stream id into a base seed (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace wsci

#endif  // WSCI_NN_HPP_
