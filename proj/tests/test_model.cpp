// tests/test_model.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <numeric>
#include <random>

#include "test_support.hpp"
#include "wsci/data.hpp"
#include "wsci/model.hpp"

using namespace wsci;
using wsci::testing::central_difference;
using wsci::testing::grad_close;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

WsciConfig small_config(int d, int m, int C, int hidden, std::uint64_t seed) {
  WsciConfig cfg;
  cfg.d = d;
  cfg.m = m;
  cfg.C = C;
  cfg.hidden = hidden;
  cfg.seed = seed;
  return cfg;
}

void zero_params(WsciModel &model) {
  for (int i = 0; i < model.params().size(); ++i)
    model.params().at(i).value.setZero();
}

}  // namespace

TEST_CASE("encode: zero-initialized heads give mu=0 and sigma=1") {
  WsciModel model(small_config(3, 2, 2, 4, 1));
  zero_params(model);
  const GaussianPosterior q = model.encode(vec({0.4, -1.0, 2.0}));
  CHECK(q.mu.size() == 2);
  CHECK(q.log_var.size() == 2);
  CHECK(q.mu.isZero());
  CHECK(q.log_var.isZero());
  CHECK(q.sigma().isApprox(Eigen::VectorXd::Ones(2)));
}

TEST_CASE("encode rejects a wrong-length input") {
  WsciModel model(small_config(3, 2, 2, 4, 1));
  CHECK_THROWS_AS(model.encode(vec({1, 2})), ShapeError);
}

TEST_CASE("reparameterize: z = mu + sigma o eps, draws recorded") {
  GaussianPosterior q;
  q.mu = vec({1, 2});
  q.log_var = vec({2.0 * std::log(0.5), 2.0 * std::log(2.0)});
  const LatentSample s = reparameterize(q, vec({2, -1}));
  CHECK(s.z.isApprox(vec({2, 0})));
  CHECK(s.eps == vec({2, -1}));

  const LatentSample at_mean = reparameterize(q, vec({0, 0}));
  CHECK(at_mean.z == q.mu);

  GaussianPosterior std_normal;
  std_normal.mu = vec({0, 0});
  std_normal.log_var = vec({0, 0});
  CHECK(reparameterize(std_normal, vec({0.3, -0.7})).z == vec({0.3, -0.7}));
}

TEST_CASE("reparameterize identity holds exactly for random draws") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    GaussianPosterior q;
    q.mu = Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return normal(rng); });
    q.log_var =
        Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return normal(rng); });
    const Eigen::VectorXd eps =
        Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return normal(rng); });
    const LatentSample s = reparameterize(q, eps);
    CHECK(s.z == q.mu + q.sigma().cwiseProduct(eps));
  }
}

TEST_CASE("decode: zero-initialized decoder returns the zero vector") {
  WsciModel model(small_config(4, 2, 2, 3, 1));
  zero_params(model);
  const DecoderOutput out = model.decode(vec({1, -1}));
  CHECK(out.mu_x.size() == 4);
  CHECK(out.mu_x.isZero());
}

TEST_CASE("recon_log_density: closed-form Gaussian values") {
  DecoderOutput out;
  out.mu_x = vec({0});
  CHECK(recon_log_density(vec({0}), out) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-12));
  CHECK(recon_log_density(vec({1}), out) ==
        doctest::Approx(-1.4189385332046727).epsilon(1e-12));
}

TEST_CASE("recon_log_density decreases strictly with distance") {
  DecoderOutput out;
  out.mu_x = vec({0.5, -0.5});
  double prev = recon_log_density(vec({0.5, -0.5}), out);
  for (double r : {0.5, 1.0, 2.0, 5.0}) {
    const double v = recon_log_density(vec({0.5 + r, -0.5}), out);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("recon_log_density equals the per-coordinate decomposition") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 6);
    Eigen::VectorXd x(d), mu(d);
    for (int j = 0; j < d; ++j) {
      x[j] = normal(rng);
      mu[j] = normal(rng);
    }
    DecoderOutput out;
    out.mu_x = mu;
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
      DecoderOutput one;
      one.mu_x = vec({mu[j]});
      sum += recon_log_density(vec({x[j]}), one);
    }
    CHECK(recon_log_density(x, out) == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("kl_standard_normal: closed-form values and non-negativity") {
  GaussianPosterior q;
  q.mu = vec({0, 0});
  q.log_var = vec({0, 0});
  CHECK(kl_standard_normal(q) == doctest::Approx(0.0));

  q.mu = vec({1, 0});
  CHECK(kl_standard_normal(q) == doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    q.mu = Eigen::VectorXd::NullaryExpr(3, [&](Eigen::Index) { return normal(rng); });
    q.log_var =
        Eigen::VectorXd::NullaryExpr(3, [&](Eigen::Index) { return normal(rng); });
    CHECK(kl_standard_normal(q) >= 0.0);
  }
}

TEST_CASE("semantic_class_probs: uniform, hand value, temperature limit") {
  // z orthogonal to every column
  Eigen::MatrixXd A(2, 4);
  A << 1, 2, -1, 0, 0, 0, 0, 0;
  const Eigen::VectorXd probs = semantic_class_probs(vec({0, 3}), A);
  for (int c = 0; c < 4; ++c) CHECK(probs[c] == doctest::Approx(0.25));

  // logits (1, 0)
  Eigen::MatrixXd B(1, 2);
  B << 1, 0;
  const Eigen::VectorXd two = semantic_class_probs(vec({1}), B);
  CHECK(two[0] == doctest::Approx(0.7310585786300049).epsilon(1e-12));
  CHECK(two[1] == doctest::Approx(0.2689414213699951).epsilon(1e-12));

  // scaling z drives the argmax class toward 1
  const Eigen::VectorXd hot = semantic_class_probs(vec({50}), B);
  CHECK(hot[0] > 0.999999);
}

TEST_CASE("semantic_class_probs lies on the simplex and ignores logit shifts") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd A(3, 5);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 5; ++c) A(r, c) = normal(rng);
    Eigen::VectorXd z =
        Eigen::VectorXd::NullaryExpr(3, [&](Eigen::Index) { return normal(rng); });
    if (z.squaredNorm() < 1e-8) continue;
    const Eigen::VectorXd probs = semantic_class_probs(z, A);
    CHECK(probs.minCoeff() >= 0.0);
    CHECK(probs.sum() == doctest::Approx(1.0).epsilon(1e-12));

    // add a constant to every logit via a rank-one update of A
    const double shift = normal(rng) * 10.0;
    const Eigen::MatrixXd shifted =
        A + (shift / z.squaredNorm()) * z * Eigen::RowVectorXd::Ones(5);
    CHECK(semantic_class_probs(z, shifted).isApprox(probs, 1e-9));
  }
}

TEST_CASE("semantic_vae_loss: uniform probs with perfect reconstruction") {
  // d=1, C=10, zeroed parameters: z=0 gives uniform probs, mu_x = 0 = x
  WsciModel model(small_config(1, 2, 10, 3, 1));
  zero_params(model);
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(2, 10);
  const double loss =
      model.semantic_vae_loss(vec({0}), 3, vec({0, 0}), A);
  CHECK(loss ==
        doctest::Approx(std::log(10.0) + 0.9189385332046727).epsilon(1e-10));
  CHECK(std::isfinite(loss));
  CHECK_THROWS_AS(model.semantic_vae_loss(vec({0}), 10, vec({0, 0}), A),
                  DomainError);
}

TEST_CASE("semantic_vae_loss decreases when the true-class probability rises") {
  WsciModel model(small_config(1, 2, 3, 3, 1));
  zero_params(model);
  Eigen::MatrixXd A(2, 3);
  A << 1, 0, -1, 0, 1, 0;
  const Eigen::VectorXd x = vec({0});
  // moving z toward a^0 raises p(y=0|z); reconstruction is unchanged at
  // mu_x = 0 because the decoder is zeroed
  const double far = model.semantic_vae_loss(x, 0, vec({0, 0}), A);
  const double near = model.semantic_vae_loss(x, 0, vec({2, 0}), A);
  CHECK(near < far);
}

TEST_CASE("normalize_batch_weights: hand values and edge cases") {
  const BatchWeights bw = normalize_batch_weights(vec({-3, -5, -10}));
  CHECK(bw.tilde_p[0] == 1.0);
  CHECK(bw.tilde_p[1] == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(bw.tilde_p[2] == doctest::Approx(std::exp(-7.0)).epsilon(1e-15));

  const BatchWeights equal = normalize_batch_weights(vec({-4, -4, -4}));
  for (int i = 0; i < 3; ++i) CHECK(equal.tilde_p[i] == 1.0);

  const BatchWeights single = normalize_batch_weights(vec({-123.0}));
  CHECK(single.tilde_p[0] == 1.0);

  CHECK_THROWS_AS(normalize_batch_weights(Eigen::VectorXd()), DomainError);
}

TEST_CASE("normalize_batch_weights: max is exactly 1, order preserved, (0,1]") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-60.0, 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 32);
    Eigen::VectorXd log_p =
        Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return u(rng); });
    const BatchWeights bw = normalize_batch_weights(log_p);
    CHECK(bw.tilde_p.maxCoeff() == 1.0);
    for (int i = 0; i < n; ++i) {
      CHECK(bw.tilde_p[i] > 0.0);
      CHECK(bw.tilde_p[i] <= 1.0);
      for (int j = 0; j < n; ++j)
        CHECK((log_p[i] >= log_p[j]) == (bw.tilde_p[i] >= bw.tilde_p[j]));
    }
  }
}

TEST_CASE("wsci_batch_loss: a singleton batch forces its weight to 1") {
  WsciModel model(small_config(3, 2, 4, 3, 21));
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(2, 4);
  const Eigen::VectorXd x = vec({0.2, -1.0, 0.5});
  const std::vector<Instance> batch = {{&x, 2}};
  const std::vector<Eigen::VectorXd> eps = {vec({0.3, -0.4})};

  const BatchLossResult r =
      wsci_batch_loss(model, batch, eps, A, 1e-4, nullptr, false);
  CHECK(r.tilde_p[0] == 1.0);

  // against the operations composed by hand
  const GaussianPosterior q = model.encode(x);
  const LatentSample s = reparameterize(q, eps[0]);
  const double log_p = recon_log_density(x, model.decode(s.z));
  const double log_prob =
      std::log(semantic_class_probs(s.z, A)[2]);
  CHECK(r.loss == doctest::Approx(-(log_prob + std::log(4.0)) - 1e-4 * log_p)
                      .epsilon(1e-10));
}

TEST_CASE("wsci_batch_loss: pinned ones and lambda=0 reduce to softmax loss") {
  WsciModel model(small_config(3, 2, 4, 3, 22));
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(2, 4);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> xs;
  std::vector<Instance> batch;
  std::vector<Eigen::VectorXd> eps;
  for (int i = 0; i < 4; ++i) {
    xs.push_back(Eigen::VectorXd::NullaryExpr(
        3, [&](Eigen::Index) { return normal(rng); }));
    eps.push_back(Eigen::VectorXd::NullaryExpr(
        2, [&](Eigen::Index) { return normal(rng); }));
  }
  for (int i = 0; i < 4; ++i) batch.push_back({&xs[i], i % 4});

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  const BatchLossResult r =
      wsci_batch_loss(model, batch, eps, A, 0.0, &ones, false);
  double expected = 0.0;
  for (int i = 0; i < 4; ++i) {
    const LatentSample s = reparameterize(model.encode(xs[i]), eps[i]);
    expected +=
        -std::log(semantic_class_probs(s.z, A)[batch[i].label]) - std::log(4.0);
  }
  CHECK(r.loss == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("full-model gradient check: d=4 m=3 C=2 hidden=4 batch=3") {
  WsciModel model(small_config(4, 3, 2, 4, 20240401));
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd A(3, 2);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) A(r, c) = normal(rng);

  std::vector<Eigen::VectorXd> xs, eps;
  std::vector<Instance> batch;
  for (int i = 0; i < 3; ++i) {
    xs.push_back(Eigen::VectorXd::NullaryExpr(
        4, [&](Eigen::Index) { return normal(rng); }));
    eps.push_back(Eigen::VectorXd::NullaryExpr(
        3, [&](Eigen::Index) { return normal(rng); }));
  }
  for (int i = 0; i < 3; ++i) batch.push_back({&xs[i], i % 2});

  const double lambda = 1e-4;
  // weights at the base point, then differentiate with them held constant
  model.params().zero_grads();
  const BatchLossResult base =
      wsci_batch_loss(model, batch, eps, A, lambda, nullptr, true);
  const Eigen::VectorXd pinned = base.tilde_p;

  auto loss = [&] {
    return wsci_batch_loss(model, batch, eps, A, lambda, &pinned, false).loss;
  };

  ParamStore &store = model.params();
  int checked = 0;
  for (int p = 0; p < store.size(); ++p) {
    const auto &param = store.at(p);
    for (Eigen::Index r = 0; r < param.value.rows(); ++r)
      for (Eigen::Index c = 0; c < param.value.cols(); ++c) {
        const double numeric = central_difference(store, p, r, c, loss);
        CHECK_MESSAGE(grad_close(param.grad(r, c), numeric),
                      store.at(p).name << "(" << r << "," << c
                                       << "): analytic " << param.grad(r, c)
                                       << " vs numeric " << numeric);
        ++checked;
      }
  }
  CHECK(checked == store.scalar_count());
}

TEST_CASE("encoder and decoder head gradients match finite differences") {
  WsciModel model(small_config(3, 2, 2, 3, 31));
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(
      3, [&](Eigen::Index) { return normal(rng); });
  const Eigen::VectorXd g2 = Eigen::VectorXd::NullaryExpr(
      2, [&](Eigen::Index) { return normal(rng); });
  const Eigen::VectorXd g3 = Eigen::VectorXd::NullaryExpr(
      3, [&](Eigen::Index) { return normal(rng); });

  SUBCASE("mu head") {
    auto loss = [&] { return g2.dot(model.encode(x).mu); };
    model.params().zero_grads();
    ForwardCaches fc;
    model.encode(x, fc);
    model.backward_encoder_heads(g2, Eigen::VectorXd::Zero(2), fc);
    ParamStore &store = model.params();
    for (int p = 0; p < store.size(); ++p) {
      if (store.at(p).name.rfind("enc.", 0) != 0) continue;
      const auto &param = store.at(p);
      for (Eigen::Index r = 0; r < param.value.rows(); ++r)
        for (Eigen::Index c = 0; c < param.value.cols(); ++c)
          CHECK(grad_close(param.grad(r, c),
                           central_difference(store, p, r, c, loss)));
    }
  }

  SUBCASE("decoder") {
    const Eigen::VectorXd z = vec({0.4, -0.9});
    auto loss = [&] { return g3.dot(model.decode(z).mu_x); };
    model.params().zero_grads();
    ForwardCaches fc;
    model.decode(z, fc);
    model.backward_through_decoder(g3, fc);
    ParamStore &store = model.params();
    for (int p = 0; p < store.size(); ++p) {
      if (store.at(p).name.rfind("dec.", 0) != 0) continue;
      const auto &param = store.at(p);
      for (Eigen::Index r = 0; r < param.value.rows(); ++r)
        for (Eigen::Index c = 0; c < param.value.cols(); ++c)
          CHECK(grad_close(param.grad(r, c),
                           central_difference(store, p, r, c, loss)));
    }
  }
}

TEST_CASE("train: unweighted mode equals a hand-rolled plain softmax trainer") {
  SyntheticSpec spec = default_spec(81, 3, 6);
  spec.samples_per_class = 40;
  const Dataset ds = generate(spec);
  const auto view = training_view(ds);
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(4, 3);

  WsciConfig cfg = small_config(6, 4, 3, 5, 4242);
  cfg.epochs = 3;
  cfg.batch = 16;

  WsciModel trained(cfg);
  train(trained, view, A, TrainMode::kUnweighted);

  // independent loop over the same primitives, same rng streams
  WsciModel manual(cfg);
  AdamState adam(manual.params(), cfg.base_rate, cfg.rate_decay);
  const int n = static_cast<int>(view.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 2 * epoch));
    std::mt19937_64 eps_rng(mix_seed(cfg.seed, 2 * epoch + 1));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (int start = 0; start < n; start += cfg.batch) {
      const int len = std::min(cfg.batch, n - start);
      for (int i = 0; i < len; ++i) {
        const Instance inst = view[order[start + i]];
        const Eigen::VectorXd eps = Eigen::VectorXd::NullaryExpr(
            cfg.m, [&](Eigen::Index) { return normal(eps_rng); });
        ForwardCaches fc;
        const GaussianPosterior q = manual.encode(*inst.x, fc);
        const LatentSample s = reparameterize(q, eps);
        const Eigen::VectorXd probs = semantic_class_probs(s.z, A);
        const Eigen::VectorXd dz = -(A.col(inst.label) - A * probs);
        manual.backward_through_encoder(dz, eps, q, fc);
      }
      adam_update(adam, manual.params(), epoch);
    }
  }

  for (int p = 0; p < trained.params().size(); ++p)
    CHECK(trained.params().at(p).value == manual.params().at(p).value);
}

TEST_CASE("train: loss stays finite and weights separate noise on a small set") {
  SyntheticSpec spec = default_spec(91, 3, 8);
  spec.samples_per_class = 60;
  spec.outlier_ratio = 0.3;
  spec.flip_ratio = 0.0;
  const Dataset ds = generate(spec);
  const auto view = training_view(ds);

  Eigen::MatrixXd A(4, 3);
  std::mt19937_64 arng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 3; ++c) A(r, c) = normal(arng);
  for (int c = 0; c < 3; ++c) A.col(c).normalize();

  WsciConfig cfg = small_config(8, 4, 3, 6, 555);
  cfg.epochs = 15;
  WsciModel model(cfg);
  const TrainResult tr = train(model, view, A, TrainMode::kWsci);
  REQUIRE(tr.epochs.size() == 15);
  for (const auto &e : tr.epochs) CHECK(std::isfinite(e.total_loss));

  const Eigen::VectorXd scores = outlier_scores(model, view);
  double mean_clean = 0.0, mean_noise = 0.0;
  int n_clean = 0, n_noise = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.items[i].h == 1) {
      mean_clean += scores[static_cast<Eigen::Index>(i)];
      ++n_clean;
    } else {
      mean_noise += scores[static_cast<Eigen::Index>(i)];
      ++n_noise;
    }
  }
  CHECK(mean_clean / n_clean > mean_noise / n_noise);
}

TEST_CASE("predict: sums to 1, reproducible, collapses when sigma vanishes") {
  WsciModel model(small_config(5, 3, 4, 4, 61));
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(3, 4);
  const Eigen::VectorXd x = vec({0.1, 0.2, -0.3, 1.0, -1.5});

  std::mt19937_64 r1(9), r2(9);
  const Eigen::VectorXd p1 = predict(model, x, A, 5, r1);
  const Eigen::VectorXd p2 = predict(model, x, A, 5, r2);
  CHECK(p1 == p2);
  CHECK(p1.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p1.minCoeff() >= 0.0);

  // pin log sigma^2 very low: every draw lands on mu, so L-sample
  // prediction equals the single pass
  const int lv_bias = model.params().find("enc.logvar.b");
  model.params().at(lv_bias).value.setConstant(-80.0);
  const int lv_w = model.params().find("enc.logvar.W");
  model.params().at(lv_w).value.setZero();
  std::mt19937_64 r3(1), r4(2);
  const Eigen::VectorXd many = predict(model, x, A, 5, r3);
  const Eigen::VectorXd one = predict(model, x, A, 1, r4);
  CHECK(many.isApprox(one, 1e-12));
}

TEST_CASE("outlier_scores: range, determinism, duplicates, planted outlier") {
  SyntheticSpec spec = default_spec(101, 2, 4);
  spec.samples_per_class = 30;
  spec.outlier_ratio = 0.0;
  spec.flip_ratio = 0.0;
  Dataset ds = generate(spec);
  // plant a duplicate pair and one far-away instance
  ds.items.push_back(ds.items[0]);
  LabeledFeature far;
  far.x = Eigen::VectorXd::Constant(4, 40.0);
  far.label = 0;
  far.h = 0;
  far.true_label = -1;
  ds.items.push_back(far);
  const auto view = training_view(ds);

  WsciConfig cfg = small_config(4, 3, 2, 4, 77);
  cfg.epochs = 10;
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(3, 2);
  for (int c = 0; c < 2; ++c) A.col(c).normalize();
  WsciModel model(cfg);
  train(model, view, A, TrainMode::kWsci);

  const Eigen::VectorXd scores = outlier_scores(model, view);
  CHECK(scores.maxCoeff() == 1.0);
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    CHECK(scores[i] > 0.0);
    CHECK(scores[i] <= 1.0);
  }
  CHECK(scores[0] == scores[scores.size() - 2]);  // duplicate pair
  // the planted far point scores below every cluster instance
  const double far_score = scores[scores.size() - 1];
  for (Eigen::Index i = 0; i + 1 < scores.size(); ++i)
    CHECK(far_score < scores[i]);
}

TEST_CASE("prediction and scoring are safe on a shared read-only model") {
  SyntheticSpec spec = default_spec(111, 3, 5);
  spec.samples_per_class = 20;
  const Dataset ds = generate(spec);
  const auto view = training_view(ds);
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(4, 3);
  const WsciModel model(small_config(5, 4, 3, 4, 7));

  const auto expected = predict_dataset(model, view, A, 3, 42);
  const Eigen::VectorXd expected_scores = outlier_scores(model, view);
  std::vector<std::vector<Eigen::VectorXd>> preds(4);
  std::vector<Eigen::VectorXd> scores(4);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      preds[t] = predict_dataset(model, view, A, 3, 42);
      scores[t] = outlier_scores(model, view);
    });
  for (auto &w : workers) w.join();
  for (int t = 0; t < 4; ++t) {
    REQUIRE(preds[t].size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
      CHECK(preds[t][i] == expected[i]);
    CHECK(scores[t] == expected_scores);
  }
}

TEST_CASE("checkpoint round-trip restores config and parameters exactly") {
  WsciConfig cfg = small_config(4, 3, 2, 5, 123);
  cfg.lambda = 3e-5;
  cfg.epochs = 7;
  WsciModel model(cfg);
  const std::string path = "/tmp/wsci_test_checkpoint.txt";
  save_checkpoint(model, path);
  const WsciModel back = load_checkpoint(path);
  std::remove(path.c_str());

  CHECK(back.config().d == cfg.d);
  CHECK(back.config().m == cfg.m);
  CHECK(back.config().C == cfg.C);
  CHECK(back.config().hidden == 5);
  CHECK(back.config().lambda == cfg.lambda);
  CHECK(back.config().seed == cfg.seed);
  REQUIRE(back.params().size() == model.params().size());
  for (int p = 0; p < model.params().size(); ++p)
    CHECK(back.params().at(p).value == model.params().at(p).value);
}

TEST_CASE("config: hidden defaults to round((d+m)/2) and validation fires") {
  WsciConfig cfg = small_config(16, 24, 5, 0, 1);
  CHECK(cfg.resolved_hidden() == 20);
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
