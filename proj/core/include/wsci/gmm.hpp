// core/include/wsci/gmm.hpp

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

#ifndef WSCI_GMM_HPP_
#define WSCI_GMM_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "wsci/errors.hpp"

namespace wsci {

/// Diagonal-covariance Gaussian mixture used as the visual codebook.
struct GmmModel {
  Eigen::VectorXd weights;             // component priors, sums to 1
  std::vector<Eigen::VectorXd> means;  // K vectors of length p
  std::vector<Eigen::VectorXd> vars;   // diagonal variances, floored

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return means.empty() ? 0 : static_cast<int>(means[0].size()); }

  struct FitStats {
    int iterations = 0;
    std::vector<double> mean_log_likelihood;  // one entry per EM iteration
    int reseeds = 0;
  };
  FitStats stats;
};

/// Variance floor applied per coordinate during fitting and on load.
inline constexpr double kGmmVarianceFloor = 1e-6;

/// EM with a log-sum-exp E-step and k-means++-style seeding. Components that
/// collect no responsibility mass are re-seeded from a random sample (the
/// event is counted in stats.reseeds). Stops when the mean log-likelihood
/// improves by less than tol or after max_iters iterations.
GmmModel gmm_fit(const std::vector<Eigen::VectorXd> &samples, int K,
                 std::uint64_t seed, int max_iters = 200, double tol = 1e-6);

/// Posterior component probabilities gamma_i(j) of one sample.
Eigen::VectorXd responsibilities(const Eigen::VectorXd &x, const GmmModel &gmm);

/// log sum_k pi_k N(x; mu_k, diag var_k)
double gmm_log_density(const Eigen::VectorXd &x, const GmmModel &gmm);

void save_gmm(const GmmModel &gmm, const std::string &path);
GmmModel load_gmm(const std::string &path);

}  // namespace wsci

#endif  // WSCI_GMM_HPP_
