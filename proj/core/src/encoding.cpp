// core/src/encoding.cpp

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

#include "wsci/encoding.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <random>

#include "wsci/nn.hpp"

namespace wsci {

Eigen::VectorXd suppress_smallest(const Eigen::VectorXd &v, int count) {
  Eigen::VectorXd out = v;
  if (count <= 0) return out;
  const int K = static_cast<int>(v.size());
  count = std::min(count, K);
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return v[a] < v[b]; });
  for (int i = 0; i < count; ++i) out[order[i]] = 0.0;
  return out;
}

std::vector<CategoryEncoding> encode_categories(
    const std::vector<std::vector<Eigen::VectorXd>> &proposals_by_category,
    const GmmModel &gmm) {
  const int K = gmm.components();
  const int suppress = std::min(10, K - 1);
  std::vector<CategoryEncoding> out;
  out.reserve(proposals_by_category.size());
  for (std::size_t c = 0; c < proposals_by_category.size(); ++c) {
    const auto &proposals = proposals_by_category[c];
    if (proposals.empty())
      throw DomainError("category " + std::to_string(c + 1) +
                        " has no proposals");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(K);
    for (const auto &x : proposals) mean += responsibilities(x, gmm);
    mean /= static_cast<double>(proposals.size());
    out.push_back({suppress_smallest(mean, suppress), suppress});
  }
  return out;
}

Eigen::MatrixXd build_laplacian(int C) {
  if (C < 2)
    throw DomainError("category separation needs C >= 2, got C=" +
                      std::to_string(C));
  return static_cast<double>(C) * Eigen::MatrixXd::Identity(C, C) -
         Eigen::MatrixXd::Ones(C, C);
}

double separation_objective(const Eigen::MatrixXd &W, const Eigen::MatrixXd &R,
                            const Eigen::MatrixXd &H) {
  if (W.cols() != R.rows())
    throw ShapeError("W and R disagree on the codebook size");
  if (R.cols() != H.rows() || H.rows() != H.cols())
    throw ShapeError("H must be C x C with C = columns of R");
  const Eigen::MatrixXd U = W * R;
  return (U * H * U.transpose()).trace();
}

SeparationProblem make_separation_problem(
    const std::vector<CategoryEncoding> &encodings, double beta,
    int target_rows, std::uint64_t seed) {
  if (encodings.size() < 2)
    throw DomainError("category separation needs at least 2 encodings");
  const int K = static_cast<int>(encodings[0].gamma_bar.size());
  const int C = static_cast<int>(encodings.size());
  SeparationProblem problem;
  problem.R.resize(K, C);
  for (int c = 0; c < C; ++c) {
    if (encodings[c].gamma_bar.size() != K)
      throw ShapeError("encodings must share the codebook size");
    problem.R.col(c) = encodings[c].gamma_bar;
  }
  problem.H = build_laplacian(C);
  problem.beta = beta;
  problem.target_rows = target_rows;
  problem.seed = seed;
  return problem;
}

EigenPair leading_eigenpair(const Eigen::MatrixXd &M, std::mt19937_64 &rng,
                            double tolerance, int max_iters) {
  const int K = static_cast<int>(M.rows());
  if (M.cols() != K) throw ShapeError("matrix must be square");
  if (M.cwiseAbs().maxCoeff() < 1e-14)
    throw NumericalError("degenerate (near-zero) matrix in eigen solve");

  // Gershgorin bound on the spectral radius; shifting by it makes the
  // algebraically largest eigenvalue the dominant one of M + shift*I.
  const double shift = M.cwiseAbs().rowwise().sum().maxCoeff();

  auto finalize = [](Eigen::VectorXd w, double lambda, double residual,
                     int iters) {
    // deterministic sign: largest-magnitude entry is positive
    int arg = 0;
    w.cwiseAbs().maxCoeff(&arg);
    if (w[arg] < 0.0) w = -w;
    return EigenPair{lambda, std::move(w), residual, iters};
  };

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd w(K);
  for (int j = 0; j < K; ++j) w[j] = normal(rng);
  w.normalize();

  for (int iter = 1; iter <= max_iters; ++iter) {
    Eigen::VectorXd next = M * w + shift * w;
    const double norm = next.norm();
    if (norm == 0.0)
      throw NumericalError("power iteration collapsed to the zero vector",
                           iter);
    next /= norm;
    w = next;
    const Eigen::VectorXd mw = M * w;
    const double lambda = w.dot(mw);
    const double residual = (mw - lambda * w).norm();
    if (residual <= tolerance) return finalize(w, lambda, residual, iter);
  }

  // When the eigengap is tiny relative to the shift the plain iteration
  // cannot reach the residual tolerance in any reasonable budget; finish
  // with a dense symmetric QR solve for the same leading eigenpair.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  if (eig.info() != Eigen::Success)
    throw NumericalError("eigen solve failed after power iteration stalled",
                         max_iters);
  const Eigen::VectorXd lead = eig.eigenvectors().col(K - 1);
  const double lambda = eig.eigenvalues()[K - 1];
  const double residual = (M * lead - lambda * lead).norm();
  if (residual > tolerance)
    throw NumericalError("leading eigenpair residual " +
                             std::to_string(residual) +
                             " above tolerance after " +
                             std::to_string(max_iters) + " power iterations",
                         max_iters);
  return finalize(lead, lambda, residual, max_iters);
}

TransformMatrix learn_transform(const SeparationProblem &problem) {
  const int K = static_cast<int>(problem.R.rows());
  const int C = static_cast<int>(problem.R.cols());
  if (C < 2) throw DomainError("need at least 2 categories");
  if (problem.H.rows() != C || problem.H.cols() != C)
    throw ShapeError("Laplacian must be C x C");
  int rows = problem.target_rows > 0 ? problem.target_rows : K / 2;
  if (rows < 1 || rows > K)
    throw DomainError("target_rows must lie in [1, K]");

  const Eigen::MatrixXd S = problem.R * problem.H * problem.R.transpose();

  TransformMatrix result;
  result.W.resize(rows, K);
  result.rows.reserve(rows);
  for (int r = 0; r < rows; ++r) {
    Eigen::MatrixXd M = S;
    if (r > 0) {
      const Eigen::MatrixXd Wk = result.W.topRows(r);
      M.noalias() -= 2.0 * problem.beta * (Wk.transpose() * Wk);
    }
    // keep M numerically symmetric before the eigen solve
    M = 0.5 * (M + M.transpose());
    std::mt19937_64 rng(mix_seed(problem.seed, static_cast<std::uint64_t>(r)));
    const EigenPair pair = leading_eigenpair(M, rng);
    result.W.row(r) = pair.vector.transpose();
    result.rows.push_back({pair.value, pair.residual, pair.iterations});
  }
  return result;
}

}  // namespace wsci
