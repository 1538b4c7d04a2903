// core/include/wsci/encoding.hpp

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

#ifndef WSCI_ENCODING_HPP_
#define WSCI_ENCODING_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <vector>

#include "wsci/errors.hpp"
#include "wsci/gmm.hpp"

namespace wsci {

/// Mean responsibility vector of one category with its smallest entries
/// suppressed to damp the contribution of mislabeled proposals.
struct CategoryEncoding {
  Eigen::VectorXd gamma_bar;
  int suppressed = 0;
};

/// Returns a copy of v with its `count` smallest entries set to zero,
/// breaking value ties toward the lower index.
Eigen::VectorXd suppress_smallest(const Eigen::VectorXd &v, int count);

/// Averages the responsibilities of every proposal carrying a category's
/// (noisy) label, then zeroes the min(10, K-1) smallest entries.
std::vector<CategoryEncoding> encode_categories(
    const std::vector<std::vector<Eigen::VectorXd>> &proposals_by_category,
    const GmmModel &gmm);

/// C x C matrix with C-1 on the diagonal and -1 elsewhere; folds every
/// pairwise category separation into one trace objective.
Eigen::MatrixXd build_laplacian(int C);

/// trace(W R H R^T W^T) == half the sum of squared pairwise distances of
/// the transformed category encodings.
double separation_objective(const Eigen::MatrixXd &W, const Eigen::MatrixXd &R,
                            const Eigen::MatrixXd &H);

/// Inputs of the discriminative-transform problem.
struct SeparationProblem {
  Eigen::MatrixXd R;     // K x C, columns are category encodings
  Eigen::MatrixXd H;     // C x C Laplacian
  double beta = 100.0;   // orthonormality penalty weight
  int target_rows = 0;   // rows of W to learn; 0 means K/2
  std::uint64_t seed = 1;
};

SeparationProblem make_separation_problem(
    const std::vector<CategoryEncoding> &encodings, double beta = 100.0,
    int target_rows = 0, std::uint64_t seed = 1);

struct TransformRowInfo {
  double eigenvalue = 0.0;
  double residual = 0.0;  // ||M w - lambda w|| at acceptance
  int iterations = 0;
};

/// Near-orthonormal transform learned row by row: each new row is the
/// leading eigenvector of M = R H R^T - 2 beta W^T W for the W built so far.
struct TransformMatrix {
  Eigen::MatrixXd W;  // target_rows x K, unit-norm rows
  std::vector<TransformRowInfo> rows;
};

TransformMatrix learn_transform(const SeparationProblem &problem);

/// Leading (algebraically largest) eigenpair of a symmetric matrix via
/// power iteration shifted by a Gershgorin spectral bound.
struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  int iterations = 0;
};

EigenPair leading_eigenpair(const Eigen::MatrixXd &M, std::mt19937_64 &rng,
                            double tolerance = 1e-8, int max_iters = 10000);

}  // namespace wsci

#endif  // WSCI_ENCODING_HPP_
