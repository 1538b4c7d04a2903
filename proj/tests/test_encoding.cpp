// tests/test_encoding.cpp

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

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <random>

#include "wsci/encoding.hpp"
#include "wsci/gmm.hpp"
#include "wsci/semantic_matrix.hpp"

using namespace wsci;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::vector<Eigen::VectorXd> gaussian_blob(const Eigen::VectorXd &mean,
                                           double scale, int n,
                                           std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(mean + scale * Eigen::VectorXd::NullaryExpr(
                             mean.size(),
                             [&](Eigen::Index) { return normal(rng); }));
  return out;
}

/// Half the sum of squared pairwise distances of the transformed columns;
/// the independent oracle for the trace objective.
double pairwise_separation(const Eigen::MatrixXd &W, const Eigen::MatrixXd &R) {
  double total = 0.0;
  for (Eigen::Index c = 0; c < R.cols(); ++c)
    for (Eigen::Index d = 0; d < R.cols(); ++d) {
      if (c == d) continue;
      total += 0.5 * (W * (R.col(c) - R.col(d))).squaredNorm();
    }
  return total;
}

}  // namespace

TEST_CASE("gmm_fit: K=1 recovers the closed-form single-Gaussian MLE") {
  std::mt19937_64 rng(5);
  const auto samples = gaussian_blob(vec({1.0, -2.0}), 1.5, 500, rng);
  const GmmModel gmm = gmm_fit(samples, 1, 42);

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  for (const auto &x : samples) mean += x;
  mean /= samples.size();
  Eigen::VectorXd var = Eigen::VectorXd::Zero(2);
  for (const auto &x : samples) var += (x - mean).cwiseAbs2();
  var /= samples.size();

  CHECK(gmm.weights[0] == doctest::Approx(1.0));
  CHECK(gmm.means[0].isApprox(mean, 1e-9));
  CHECK(gmm.vars[0].isApprox(var.cwiseMax(kGmmVarianceFloor), 1e-9));
}

TEST_CASE("gmm_fit: two planted clusters are recovered within 0.1") {
  std::mt19937_64 rng(7);
  const Eigen::VectorXd m1 = vec({0, 0, 0});
  const Eigen::VectorXd m2 = vec({5, 5, 5});
  auto samples = gaussian_blob(m1, 0.5, 400, rng);
  const auto second = gaussian_blob(m2, 0.5, 400, rng);
  samples.insert(samples.end(), second.begin(), second.end());

  const GmmModel gmm = gmm_fit(samples, 2, 9);
  const double d11 = (gmm.means[0] - m1).norm();
  const double d12 = (gmm.means[0] - m2).norm();
  if (d11 < d12) {
    CHECK(d11 < 0.1);
    CHECK((gmm.means[1] - m2).norm() < 0.1);
  } else {
    CHECK(d12 < 0.1);
    CHECK((gmm.means[1] - m1).norm() < 0.1);
  }
  CHECK(gmm.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gmm_fit: mean log-likelihood never decreases (1e-9 slack)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Eigen::VectorXd> samples;
    const int blobs = 1 + static_cast<int>(rng() % 3);
    for (int b = 0; b < blobs; ++b) {
      std::normal_distribution<double> center(-4.0, 4.0);
      Eigen::VectorXd mean = Eigen::VectorXd::NullaryExpr(
          3, [&](Eigen::Index) { return center(rng); });
      const auto blob = gaussian_blob(mean, 0.8, 80, rng);
      samples.insert(samples.end(), blob.begin(), blob.end());
    }
    const int K = 1 + static_cast<int>(rng() % 4);
    const GmmModel gmm = gmm_fit(samples, K, rng());
    const auto &ll = gmm.stats.mean_log_likelihood;
    REQUIRE(!ll.empty());
    for (std::size_t i = 1; i < ll.size(); ++i)
      CHECK(ll[i] >= ll[i - 1] - 1e-9);
  }
}

TEST_CASE("gmm_fit rejects fewer samples than components") {
  std::mt19937_64 rng(3);
  const auto samples = gaussian_blob(vec({0.0}), 1.0, 4, rng);
  CHECK_THROWS_AS(gmm_fit(samples, 5, 1), DomainError);
  CHECK_THROWS_AS(gmm_fit(samples, 0, 1), DomainError);
}

TEST_CASE("responsibilities: single component, symmetry, hand value") {
  GmmModel single;
  single.weights = vec({1.0});
  single.means = {vec({0, 0})};
  single.vars = {vec({1, 1})};
  CHECK(responsibilities(vec({3, -1}), single)[0] == doctest::Approx(1.0));

  GmmModel twin;
  twin.weights = vec({0.5, 0.5});
  twin.means = {vec({1.0}), vec({1.0})};
  twin.vars = {vec({2.0}), vec({2.0})};
  const Eigen::VectorXd same = responsibilities(vec({0.3}), twin);
  CHECK(same[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(same[1] == doctest::Approx(0.5).epsilon(1e-12));

  // unit-variance components at 0 and 4, equal priors, x = 1:
  // the joint ratio is exp(-0.5) / exp(-4.5) = e^4
  GmmModel apart;
  apart.weights = vec({0.5, 0.5});
  apart.means = {vec({0.0}), vec({4.0})};
  apart.vars = {vec({1.0}), vec({1.0})};
  const Eigen::VectorXd gamma = responsibilities(vec({1.0}), apart);
  CHECK(gamma[0] / gamma[1] == doctest::Approx(std::exp(4.0)).epsilon(1e-10));
  CHECK(gamma[0] == doctest::Approx(1.0 / (1.0 + std::exp(-4.0))).epsilon(1e-12));
  CHECK(gamma.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("responsibilities always land on the simplex") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  GmmModel gmm;
  gmm.weights = vec({0.2, 0.5, 0.3});
  gmm.means = {vec({0, 0}), vec({3, 3}), vec({-2, 5})};
  gmm.vars = {vec({1, 2}), vec({0.5, 0.5}), vec({2, 1})};
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = 10.0 * Eigen::VectorXd::NullaryExpr(
                                         2, [&](Eigen::Index) { return normal(rng); });
    const Eigen::VectorXd gamma = responsibilities(x, gmm);
    CHECK(gamma.minCoeff() >= 0.0);
    CHECK(gamma.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("suppress_smallest: mechanics, ties, idempotence") {
  // K=12 with two dominant entries: exactly the 10 smallest go to zero
  Eigen::VectorXd v(12);
  v << 0.01, 0.02, 0.3, 0.03, 0.04, 0.05, 0.35, 0.01, 0.02, 0.06, 0.05, 0.06;
  const Eigen::VectorXd s = suppress_smallest(v, 10);
  int nonzero = 0;
  for (int i = 0; i < 12; ++i) nonzero += s[i] != 0.0;
  CHECK(nonzero == 2);
  CHECK(s[2] == 0.3);
  CHECK(s[6] == 0.35);

  // ties break toward the lower index
  const Eigen::VectorXd t = suppress_smallest(vec({0.5, 0.25, 0.25}), 1);
  CHECK(t[0] == 0.5);
  CHECK(t[1] == 0.0);
  CHECK(t[2] == 0.25);

  // never increases an entry, never zeroes the maximum
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd w =
        Eigen::VectorXd::NullaryExpr(8, [&](Eigen::Index) { return u(rng); });
    const int count = static_cast<int>(rng() % 8);  // up to K-1
    const Eigen::VectorXd once = suppress_smallest(w, std::min(count, 7));
    for (int i = 0; i < 8; ++i) CHECK(once[i] <= w[i]);
    Eigen::Index arg;
    w.maxCoeff(&arg);
    CHECK(once[arg] == w.maxCoeff());
    CHECK(suppress_smallest(once, std::min(count, 7)) == once);
  }
}

TEST_CASE("encode_categories: mean responsibilities then suppression") {
  GmmModel gmm;
  gmm.weights = vec({0.5, 0.5});
  gmm.means = {vec({0.0}), vec({4.0})};
  gmm.vars = {vec({1.0}), vec({1.0})};

  // one proposal per category: the mean equals that proposal's gamma,
  // then min(10, K-1) = 1 entry is suppressed
  const std::vector<std::vector<Eigen::VectorXd>> groups = {{vec({1.0})},
                                                            {vec({3.5})}};
  const auto encodings = encode_categories(groups, gmm);
  REQUIRE(encodings.size() == 2);
  CHECK(encodings[0].suppressed == 1);
  const Eigen::VectorXd gamma = responsibilities(vec({1.0}), gmm);
  CHECK(encodings[0].gamma_bar == suppress_smallest(gamma, 1));

  const std::vector<std::vector<Eigen::VectorXd>> with_empty = {{vec({1.0})},
                                                                {}};
  try {
    encode_categories(with_empty, gmm);
    FAIL("expected DomainError");
  } catch (const DomainError &e) {
    CHECK(std::string(e.what()).find("category 2") != std::string::npos);
  }
}

TEST_CASE("build_laplacian: C=3 instance, row sums, spectrum") {
  const Eigen::MatrixXd H = build_laplacian(3);
  Eigen::MatrixXd expected(3, 3);
  expected << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  CHECK(H == expected);
  CHECK((H.rowwise().sum().array() == 0.0).all());

  for (int C : {2, 4, 7}) {
    const Eigen::MatrixXd L = build_laplacian(C);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L);
    CHECK(eig.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-10));
    for (int i = 1; i < C; ++i)
      CHECK(eig.eigenvalues()[i] == doctest::Approx(double(C)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(build_laplacian(1), DomainError);
}

TEST_CASE("separation_objective: identity case and pairwise oracle") {
  Eigen::MatrixXd R(2, 2);
  R << 1, 0, 0, 1;
  const Eigen::MatrixXd H = build_laplacian(2);
  CHECK(separation_objective(Eigen::MatrixXd::Identity(2, 2), R, H) ==
        doctest::Approx(2.0).epsilon(1e-12));

  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 3 + static_cast<int>(rng() % 5);
    const int C = 2 + static_cast<int>(rng() % 4);
    const int rows = 1 + static_cast<int>(rng() % K);
    Eigen::MatrixXd W(rows, K), Rr(K, C);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < K; ++c) W(r, c) = normal(rng);
    for (int r = 0; r < K; ++r)
      for (int c = 0; c < C; ++c) Rr(r, c) = normal(rng);
    const double trace_form = separation_objective(W, Rr, build_laplacian(C));
    CHECK(trace_form ==
          doctest::Approx(pairwise_separation(W, Rr)).epsilon(1e-8));
  }

  // all categories identical: zero separation
  Eigen::MatrixXd same(3, 4);
  same.colwise() = vec({0.2, 0.5, 0.3});
  CHECK(separation_objective(Eigen::MatrixXd::Identity(3, 3), same,
                             build_laplacian(4)) ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("learn_transform: first row is the leading eigenvector of R H R^T") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd R(6, 4);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 4; ++c) R(r, c) = std::abs(normal(rng));

  SeparationProblem problem;
  problem.R = R;
  problem.H = build_laplacian(4);
  problem.beta = 100.0;
  problem.target_rows = 1;
  problem.seed = 5;
  const TransformMatrix tm = learn_transform(problem);
  REQUIRE(tm.W.rows() == 1);
  CHECK(std::abs(tm.W.row(0).norm() - 1.0) <= 1e-9);

  const Eigen::MatrixXd S = R * problem.H * R.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  const Eigen::VectorXd lead = eig.eigenvectors().col(5);
  CHECK(std::abs(lead.dot(tm.W.row(0))) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(tm.rows[0].eigenvalue ==
        doctest::Approx(eig.eigenvalues()[5]).epsilon(1e-8));
}

TEST_CASE("learn_transform: unit rows, per-step residuals, near-orthonormal") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int K = 16, C = 5;
  Eigen::MatrixXd R(K, C);
  for (int r = 0; r < K; ++r)
    for (int c = 0; c < C; ++c) R(r, c) = u(rng) / K;

  SeparationProblem problem;
  problem.R = R;
  problem.H = build_laplacian(C);
  problem.beta = 100.0;
  problem.target_rows = 8;
  problem.seed = 2;
  const TransformMatrix tm = learn_transform(problem);
  REQUIRE(tm.W.rows() == 8);

  const Eigen::MatrixXd S = R * problem.H * R.transpose();
  for (int r = 0; r < 8; ++r) {
    CHECK(std::abs(tm.W.row(r).norm() - 1.0) <= 1e-9);
    Eigen::MatrixXd M = S;
    if (r > 0) {
      const Eigen::MatrixXd Wk = tm.W.topRows(r);
      M.noalias() -= 2.0 * problem.beta * (Wk.transpose() * Wk);
    }
    M = 0.5 * (M + M.transpose());
    const Eigen::VectorXd w = tm.W.row(r).transpose();
    const double lambda = w.dot(M * w);
    CHECK((M * w - lambda * w).norm() <= 1e-8);
  }
  const Eigen::MatrixXd gram = tm.W * tm.W.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).norm() < 0.1);
}

TEST_CASE("learn_transform defaults target_rows to K/2") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd R(8, 3);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 3; ++c) R(r, c) = u(rng);
  std::vector<CategoryEncoding> encodings;
  for (int c = 0; c < 3; ++c) encodings.push_back({R.col(c), 0});
  const SeparationProblem problem = make_separation_problem(encodings);
  CHECK(problem.beta == 100.0);
  const TransformMatrix tm = learn_transform(problem);
  CHECK(tm.W.rows() == 4);
}

TEST_CASE("leading_eigenpair flags degenerate matrices") {
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(
      leading_eigenpair(Eigen::MatrixXd::Zero(4, 4), rng),
      NumericalError);
}

TEST_CASE("hybrid_concat: normalization, offsets, AwA2-shaped widths") {
  Eigen::MatrixXd attr(2, 3), words(3, 3);
  attr << 3, 0, 1, 4, 2, 1;
  words << 1, 2, 3, 0, 2, 0, 0, 2, 4;
  const SemanticMatrix sm = hybrid_concat({{"attr", attr}, {"word", words}});
  CHECK(sm.dim() == 5);
  CHECK(sm.categories() == 3);
  REQUIRE(sm.blocks.size() == 2);
  CHECK(sm.blocks[0].offset == 0);
  CHECK(sm.blocks[0].width == 2);
  CHECK(sm.blocks[1].offset == 2);
  CHECK(sm.blocks[1].width == 3);
  for (int c = 0; c < 3; ++c) {
    CHECK(sm.A.col(c).head(2).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sm.A.col(c).tail(3).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  // single block: just unit-norm columns
  const SemanticMatrix one = hybrid_concat({{"attr", attr}});
  CHECK(one.dim() == 2);
  CHECK(one.A.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));

  // AwA2-shaped hybrid: 85 + 500 + 128 = 713
  const SemanticMatrix awa2 =
      hybrid_concat({{"attr", Eigen::MatrixXd::Random(85, 4)},
                     {"word", Eigen::MatrixXd::Random(500, 4)},
                     {"visual", Eigen::MatrixXd::Random(128, 4)}});
  CHECK(awa2.dim() == 713);

  Eigen::MatrixXd mismatched(2, 4);
  CHECK_THROWS_AS(hybrid_concat({{"a", attr}, {"b", mismatched}}), ShapeError);
  Eigen::MatrixXd with_zero = attr;
  with_zero.col(1).setZero();
  CHECK_THROWS_AS(hybrid_concat({{"a", with_zero}}), DomainError);
}

TEST_CASE("gmm file round-trip") {
  std::mt19937_64 rng(61);
  const auto samples = gaussian_blob(vec({1, 2, 3}), 1.0, 60, rng);
  const GmmModel gmm = gmm_fit(samples, 3, 8);
  const std::string path = "/tmp/wsci_test_gmm.txt";
  save_gmm(gmm, path);
  const GmmModel back = load_gmm(path);
  std::remove(path.c_str());
  REQUIRE(back.components() == gmm.components());
  CHECK(back.weights == gmm.weights);
  for (int k = 0; k < gmm.components(); ++k) {
    CHECK(back.means[k] == gmm.means[k]);
    CHECK(back.vars[k] == gmm.vars[k]);
  }
}

TEST_CASE("semantic matrix file round-trip preserves blocks and values") {
  Eigen::MatrixXd attr = Eigen::MatrixXd::Random(4, 3);
  Eigen::MatrixXd visual = Eigen::MatrixXd::Random(6, 3);
  const SemanticMatrix sm = hybrid_concat({{"attr", attr}, {"visual", visual}});
  const std::string path = "/tmp/wsci_test_semantic.txt";
  save_semantic_matrix(sm, path);
  const SemanticMatrix back = load_semantic_matrix(path);
  std::remove(path.c_str());
  CHECK(back.dim() == sm.dim());
  CHECK(back.categories() == sm.categories());
  REQUIRE(back.blocks.size() == 2);
  CHECK(back.blocks[1].name == "visual");
  CHECK(back.blocks[1].offset == 4);
  CHECK(back.A == sm.A);
}
