// benchmarks/bench_core.cpp

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

#include <benchmark/benchmark.h>

#include <random>

#include "wsci/data.hpp"
#include "wsci/encoding.hpp"
#include "wsci/gmm.hpp"
#include "wsci/model.hpp"

namespace {

using namespace wsci;

WsciConfig bench_config() {
  WsciConfig cfg;
  cfg.d = 16;
  cfg.m = 24;
  cfg.C = 5;
  cfg.seed = 42;
  return cfg;
}

void BM_DenseForwardBackward(benchmark::State &state) {
  ParamStore store;
  DenseLayer layer(store, "l", 16, 20, Activation::kTanh);
  std::mt19937_64 rng(1);
  init_params(store, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(
      16, [&](Eigen::Index) { return normal(rng); });
  const Eigen::VectorXd g = Eigen::VectorXd::NullaryExpr(
      20, [&](Eigen::Index) { return normal(rng); });
  for (auto _ : state) {
    LayerCache cache;
    benchmark::DoNotOptimize(layer.forward(store, x, cache));
    benchmark::DoNotOptimize(layer.backward(store, g, cache));
    store.zero_grads();
  }
}
BENCHMARK(BM_DenseForwardBackward);

void BM_WsciBatchLoss(benchmark::State &state) {
  const WsciConfig cfg = bench_config();
  WsciModel model(cfg);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd A(cfg.m, cfg.C);
  for (int r = 0; r < cfg.m; ++r)
    for (int c = 0; c < cfg.C; ++c) A(r, c) = normal(rng);

  std::vector<Eigen::VectorXd> xs, eps;
  std::vector<Instance> batch;
  for (int i = 0; i < 64; ++i) {
    xs.push_back(Eigen::VectorXd::NullaryExpr(
        cfg.d, [&](Eigen::Index) { return normal(rng); }));
    eps.push_back(Eigen::VectorXd::NullaryExpr(
        cfg.m, [&](Eigen::Index) { return normal(rng); }));
  }
  for (int i = 0; i < 64; ++i) batch.push_back({&xs[i], i % cfg.C});

  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wsci_batch_loss(model, batch, eps, A, 1e-4, nullptr, true));
    model.params().zero_grads();
  }
}
BENCHMARK(BM_WsciBatchLoss);

void BM_GmmResponsibilities(benchmark::State &state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> samples;
  for (int i = 0; i < 256; ++i)
    samples.push_back(Eigen::VectorXd::NullaryExpr(
        16, [&](Eigen::Index) { return normal(rng); }));
  const GmmModel gmm = gmm_fit(samples, 32, 7, 20);
  const Eigen::VectorXd x = samples[0];
  for (auto _ : state) benchmark::DoNotOptimize(responsibilities(x, gmm));
}
BENCHMARK(BM_GmmResponsibilities);

void BM_LearnTransform(benchmark::State &state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int K = 32, C = 8;
  Eigen::MatrixXd R(K, C);
  for (int r = 0; r < K; ++r)
    for (int c = 0; c < C; ++c) R(r, c) = u(rng) / K;
  SeparationProblem problem;
  problem.R = R;
  problem.H = build_laplacian(C);
  problem.target_rows = 16;
  problem.seed = 11;
  for (auto _ : state) benchmark::DoNotOptimize(learn_transform(problem));
}
BENCHMARK(BM_LearnTransform);

}  // namespace

BENCHMARK_MAIN();
