// core/src/gmm.cpp

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

#include "wsci/gmm.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "text_format.hpp"

namespace wsci {

namespace {

double log_gaussian_diag(const Eigen::VectorXd &x, const Eigen::VectorXd &mu,
                         const Eigen::VectorXd &var) {
  const Eigen::ArrayXd diff = (x - mu).array();
  return -0.5 * (var.array().log() + std::numbers::ln2 + std::log(std::numbers::pi) +
                 diff.square() / var.array())
                    .sum();
}

/// log weights of one sample against every component.
Eigen::VectorXd component_log_joint(const Eigen::VectorXd &x,
                                    const GmmModel &gmm) {
  const int K = gmm.components();
  Eigen::VectorXd lw(K);
  for (int k = 0; k < K; ++k)
    lw[k] = std::log(gmm.weights[k]) +
            log_gaussian_diag(x, gmm.means[k], gmm.vars[k]);
  return lw;
}

double log_sum_exp(const Eigen::VectorXd &v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

Eigen::VectorXd global_variance(const std::vector<Eigen::VectorXd> &samples) {
  const int p = static_cast<int>(samples[0].size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (const auto &x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  Eigen::VectorXd var = Eigen::VectorXd::Zero(p);
  for (const auto &x : samples) var += (x - mean).cwiseAbs2();
  var /= static_cast<double>(samples.size());
  return var.cwiseMax(kGmmVarianceFloor);
}

/// k-means++ style seeding: next mean drawn proportionally to the squared
/// distance from the closest already-chosen mean.
std::vector<Eigen::VectorXd> seed_means(
    const std::vector<Eigen::VectorXd> &samples, int K, std::mt19937_64 &rng) {
  const std::size_t n = samples.size();
  std::vector<Eigen::VectorXd> means;
  means.reserve(K);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  means.push_back(samples[first(rng)]);
  std::vector<double> d2(n, 0.0);
  for (int k = 1; k < K; ++k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &m : means)
        best = std::min(best, (samples[i] - m).squaredNorm());
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      means.push_back(samples[first(rng)]);
      continue;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double target = u(rng);
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= d2[i];
      if (target <= 0.0) {
        pick = i;
        break;
      }
    }
    means.push_back(samples[pick]);
  }
  return means;
}

}  // namespace

GmmModel gmm_fit(const std::vector<Eigen::VectorXd> &samples, int K,
                 std::uint64_t seed, int max_iters, double tol) {
  if (K < 1) throw DomainError("K must be >= 1");
  if (samples.size() < static_cast<std::size_t>(K))
    throw DomainError("need at least K=" + std::to_string(K) + " samples, got " +
                      std::to_string(samples.size()));
  const int p = static_cast<int>(samples[0].size());
  for (const auto &x : samples)
    if (x.size() != p) throw ShapeError("samples must share one dimension");

  std::mt19937_64 rng(seed);
  const Eigen::VectorXd gvar = global_variance(samples);

  GmmModel gmm;
  gmm.weights = Eigen::VectorXd::Constant(K, 1.0 / K);
  gmm.means = seed_means(samples, K, rng);
  gmm.vars.assign(K, gvar);

  const std::size_t n = samples.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double prev_mean_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::VectorXd nk = Eigen::VectorXd::Zero(K);
    Eigen::MatrixXd sum_x = Eigen::MatrixXd::Zero(p, K);
    Eigen::MatrixXd sum_x2 = Eigen::MatrixXd::Zero(p, K);
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::VectorXd lw = component_log_joint(samples[i], gmm);
      const double lse = log_sum_exp(lw);
      ll += lse;
      const Eigen::VectorXd gamma = (lw.array() - lse).exp();
      nk += gamma;
      sum_x.noalias() += samples[i] * gamma.transpose();
      sum_x2.noalias() += samples[i].cwiseAbs2() * gamma.transpose();
    }
    const double mean_ll = ll / static_cast<double>(n);
    gmm.stats.mean_log_likelihood.push_back(mean_ll);
    gmm.stats.iterations = iter + 1;

    bool reseeded = false;
    for (int k = 0; k < K; ++k) {
      if (nk[k] < 1e-10) {
        gmm.means[k] = samples[pick(rng)];
        gmm.vars[k] = gvar;
        gmm.weights[k] = 1.0 / static_cast<double>(n);
        gmm.stats.reseeds += 1;
        reseeded = true;
        continue;
      }
      gmm.weights[k] = nk[k] / static_cast<double>(n);
      gmm.means[k] = sum_x.col(k) / nk[k];
      gmm.vars[k] = (sum_x2.col(k) / nk[k] - gmm.means[k].cwiseAbs2())
                        .cwiseMax(kGmmVarianceFloor);
    }
    if (reseeded) gmm.weights /= gmm.weights.sum();

    if (mean_ll - prev_mean_ll < tol && iter > 0) break;
    prev_mean_ll = mean_ll;
  }
  return gmm;
}

Eigen::VectorXd responsibilities(const Eigen::VectorXd &x,
                                 const GmmModel &gmm) {
  if (x.size() != gmm.dim())
    throw ShapeError("sample dimension does not match the mixture");
  const Eigen::VectorXd lw = component_log_joint(x, gmm);
  const double lse = log_sum_exp(lw);
  return (lw.array() - lse).exp();
}

double gmm_log_density(const Eigen::VectorXd &x, const GmmModel &gmm) {
  return log_sum_exp(component_log_joint(x, gmm));
}

void save_gmm(const GmmModel &gmm, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write GMM file '" + path + "'");
  out << "gmm K=" << gmm.components() << " p=" << gmm.dim() << "\n";
  for (int k = 0; k < gmm.components(); ++k) {
    out << "pi " << detail::fmt_double(gmm.weights[k]) << "\n";
    out << "mu";
    for (int j = 0; j < gmm.dim(); ++j)
      out << " " << detail::fmt_double(gmm.means[k][j]);
    out << "\nvar";
    for (int j = 0; j < gmm.dim(); ++j)
      out << " " << detail::fmt_double(gmm.vars[k][j]);
    out << "\n";
  }
}

GmmModel load_gmm(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open GMM file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty GMM file", 1);
  int K = 0, p = 0;
  {
    std::istringstream hs(line);
    std::string magic, tok;
    hs >> magic;
    if (magic != "gmm") throw ParseError("missing 'gmm' magic", 1);
    while (hs >> tok) {
      int value = 0;
      if (tok.rfind("K=", 0) == 0 && detail::parse_int(tok.substr(2), &value))
        K = value;
      else if (tok.rfind("p=", 0) == 0 &&
               detail::parse_int(tok.substr(2), &value))
        p = value;
      else
        throw ParseError("unrecognized header token '" + tok + "'", 1);
    }
    if (K < 1 || p < 1) throw ParseError("header must carry K= and p=", 1);
  }
  GmmModel gmm;
  gmm.weights.resize(K);
  gmm.means.assign(K, Eigen::VectorXd(p));
  gmm.vars.assign(K, Eigen::VectorXd(p));
  int lineno = 1;
  for (int k = 0; k < K; ++k) {
    std::string tag;
    if (!(in >> tag) || tag != "pi")
      throw ParseError("expected 'pi' for component " + std::to_string(k + 1),
                       ++lineno);
    if (!(in >> gmm.weights[k]))
      throw ParseError("bad pi value", lineno);
    if (!(in >> tag) || tag != "mu")
      throw ParseError("expected 'mu' for component " + std::to_string(k + 1),
                       ++lineno);
    for (int j = 0; j < p; ++j)
      if (!(in >> gmm.means[k][j])) throw ParseError("truncated mu row", lineno);
    if (!(in >> tag) || tag != "var")
      throw ParseError("expected 'var' for component " + std::to_string(k + 1),
                       ++lineno);
    for (int j = 0; j < p; ++j) {
      if (!(in >> gmm.vars[k][j])) throw ParseError("truncated var row", lineno);
      if (!(gmm.vars[k][j] > 0.0))
        throw DomainError("non-positive variance in GMM file");
    }
  }
  const double total = gmm.weights.sum();
  if (std::abs(total - 1.0) > 1e-9)
    throw DomainError("GMM priors sum to " + std::to_string(total));
  return gmm;
}

}  // namespace wsci
