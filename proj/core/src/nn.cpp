// core/src/nn.cpp

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

#include "wsci/nn.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_format.hpp"

namespace wsci {

Eigen::VectorXd apply_activation(Activation act, const Eigen::VectorXd &u) {
  switch (act) {
    case Activation::kIdentity:
      return u;
    case Activation::kTanh:
      return u.array().tanh();
    case Activation::kRelu:
      return u.cwiseMax(0.0);
  }
  throw DomainError("invalid activation tag");
}

Eigen::VectorXd activation_grad(Activation act, const Eigen::VectorXd &u) {
  switch (act) {
    case Activation::kIdentity:
      return Eigen::VectorXd::Ones(u.size());
    case Activation::kTanh:
      return 1.0 - u.array().tanh().square();
    case Activation::kRelu:
      return (u.array() > 0.0).cast<double>();
  }
  throw DomainError("invalid activation tag");
}

int ParamStore::add(const std::string &name, int rows, int cols) {
  if (rows <= 0 || cols <= 0)
    throw ShapeError("parameter '" + name + "' must have positive shape");
  if (find(name) >= 0)
    throw DomainError("duplicate parameter name '" + name + "'");
  Param p;
  p.name = name;
  p.value = Eigen::MatrixXd::Zero(rows, cols);
  p.grad = Eigen::MatrixXd::Zero(rows, cols);
  params_.push_back(std::move(p));
  return static_cast<int>(params_.size()) - 1;
}

int ParamStore::find(const std::string &name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return static_cast<int>(i);
  return -1;
}

void ParamStore::zero_grads() {
  for (auto &p : params_) p.grad.setZero();
}

long ParamStore::scalar_count() const {
  long n = 0;
  for (const auto &p : params_) n += p.value.size();
  return n;
}

void ParamStore::save(std::ostream &out) const {
  out << "params " << params_.size() << "\n";
  for (const auto &p : params_) {
    out << p.name << " " << p.value.rows() << " " << p.value.cols() << "\n";
    for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.value.cols(); ++c) {
        if (r + c > 0) out << " ";
        out << detail::fmt_double(p.value(r, c));
      }
    }
    out << "\n";
  }
}

void ParamStore::load(std::istream &in) {
  std::string tag;
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "params")
    throw ParseError("expected 'params <count>' header in snapshot");
  const bool adopt = params_.empty();
  if (!adopt && count != params_.size())
    throw ShapeError("snapshot has " + std::to_string(count) +
                     " parameters, store has " + std::to_string(params_.size()));
  for (std::size_t i = 0; i < count; ++i) {
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> name >> rows >> cols))
      throw ParseError("truncated snapshot parameter header");
    if (adopt) {
      add(name, static_cast<int>(rows), static_cast<int>(cols));
    } else {
      const Param &p = params_[i];
      if (p.name != name || p.value.rows() != rows || p.value.cols() != cols)
        throw ShapeError("snapshot parameter '" + name +
                         "' does not match store layout at position " +
                         std::to_string(i));
    }
    Param &p = params_[i];
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (!(in >> p.value(r, c)))
          throw ParseError("truncated values for parameter '" + name + "'");
    p.grad = Eigen::MatrixXd::Zero(rows, cols);
  }
}

DenseLayer::DenseLayer(ParamStore &store, const std::string &name, int in_dim,
                       int out_dim, Activation act)
    : in_(in_dim), out_(out_dim), act_(act) {
  w_ = store.add(name + ".W", out_dim, in_dim);
  b_ = store.add(name + ".b", out_dim, 1);
}

Eigen::VectorXd DenseLayer::forward(const ParamStore &store,
                                    const Eigen::VectorXd &x,
                                    LayerCache &cache) const {
  if (x.size() != in_)
    throw ShapeError("layer expects input of length " + std::to_string(in_) +
                     ", got " + std::to_string(x.size()));
  cache.input = x;
  cache.preact = store.at(w_).value * x + store.at(b_).value.col(0);
  cache.valid = true;
  return apply_activation(act_, cache.preact);
}

Eigen::VectorXd DenseLayer::backward(ParamStore &store,
                                     const Eigen::VectorXd &upstream,
                                     const LayerCache &cache) const {
  if (!cache.valid) throw StateError("backward called before forward");
  if (upstream.size() != out_)
    throw ShapeError("upstream gradient of length " +
                     std::to_string(upstream.size()) + " for layer of width " +
                     std::to_string(out_));
  const Eigen::VectorXd g =
      upstream.cwiseProduct(activation_grad(act_, cache.preact));
  store.at(w_).grad.noalias() += g * cache.input.transpose();
  store.at(b_).grad.col(0) += g;
  return store.at(w_).value.transpose() * g;
}

void init_params(ParamStore &store, std::mt19937_64 &rng) {
  for (int i = 0; i < store.size(); ++i) {
    Param &p = store.at(i);
    if (p.value.cols() == 1) {
      p.value.setZero();  // bias
      continue;
    }
    const double fan_in = static_cast<double>(p.value.cols());
    const double fan_out = static_cast<double>(p.value.rows());
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index r = 0; r < p.value.rows(); ++r)
      for (Eigen::Index c = 0; c < p.value.cols(); ++c)
        p.value(r, c) = dist(rng);
  }
}

AdamState::AdamState(const ParamStore &store, double base_rate, double decay,
                     double beta1, double beta2, double epsilon)
    : base_rate_(base_rate),
      decay_(decay),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {
  if (base_rate_ <= 0 || decay_ <= 0)
    throw ConfigError("Adam rates must be positive");
  m_.reserve(store.size());
  v_.reserve(store.size());
  for (int i = 0; i < store.size(); ++i) {
    const auto &val = store.at(i).value;
    m_.push_back(Eigen::MatrixXd::Zero(val.rows(), val.cols()));
    v_.push_back(Eigen::MatrixXd::Zero(val.rows(), val.cols()));
  }
}

double AdamState::effective_rate(int epoch) const {
  return base_rate_ * std::pow(decay_, epoch);
}

void adam_update(AdamState &state, ParamStore &store, int epoch) {
  if (static_cast<int>(state.m_.size()) != store.size())
    throw ShapeError("AdamState built for a different parameter store");
  state.step_ += 1;
  const double t = static_cast<double>(state.step_);
  const double rate = state.effective_rate(epoch);
  const double bc1 = 1.0 - std::pow(state.beta1_, t);
  const double bc2 = 1.0 - std::pow(state.beta2_, t);
  for (int i = 0; i < store.size(); ++i) {
    Param &p = store.at(i);
    Eigen::MatrixXd &m = state.m_[i];
    Eigen::MatrixXd &v = state.v_[i];
    m = state.beta1_ * m + (1.0 - state.beta1_) * p.grad;
    v = state.beta2_ * v + (1.0 - state.beta2_) * p.grad.cwiseProduct(p.grad);
    const Eigen::MatrixXd m_hat = m / bc1;
    const Eigen::MatrixXd v_hat = v / bc2;
    p.value.array() -=
        rate * m_hat.array() / (v_hat.array().sqrt() + state.epsilon_);
    p.grad.setZero();
  }
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace wsci
