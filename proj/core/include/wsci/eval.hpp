// core/include/wsci/eval.hpp

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

#ifndef WSCI_EVAL_HPP_
#define WSCI_EVAL_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "wsci/data.hpp"
#include "wsci/errors.hpp"
#include "wsci/model.hpp"
#include "wsci/semantic_matrix.hpp"

namespace wsci {

/// wsci: the full weighted system.
/// sim1: independent classifier on x weighted by a plain VAE's p~.
/// sim2: like sim1, but the VAE is the semantic VAE (classifier on z).
/// unweighted: all weights 1 and no reconstruction term.
enum class AblationMode { kWsci, kSim1, kSim2, kUnweighted };

std::string to_string(AblationMode mode);
AblationMode ablation_mode_from_string(const std::string &name);

struct EpochCurve {
  int epoch = 0;
  double loss = 0.0;
  double eval_accuracy = -1.0;  // -1 when no eval set was attached
};

struct RunReport {
  AblationMode mode = AblationMode::kWsci;
  std::uint64_t seed = 0;
  int window_start = 0;  // 1-based s(i) start; 0 when not a sweep run
  double accuracy = 0.0;
  double auc = 0.0;
  double precision_top_k = 0.0;     // non-outliers among the k best scores
  double precision_bottom_k = 0.0;  // noise among the k worst scores
  double mean_p_non_outlier = 0.0;
  double mean_p_noise = 0.0;
  std::vector<EpochCurve> curves;
};

/// Fraction of argmax matches; ties resolved toward the lowest index.
double accuracy(const std::vector<Eigen::VectorXd> &predictions,
                const std::vector<int> &true_labels);

/// Probability that a random non-outlier outscores a random noise instance
/// (Mann-Whitney; ties count one half).
double outlier_auc(const Eigen::VectorXd &scores,
                   const std::vector<int> &h_flags);

/// top=true: fraction of the k highest-scored instances with h=1;
/// top=false: fraction of the k lowest-scored instances with h=0.
double precision_at_k(const Eigen::VectorXd &scores,
                      const std::vector<int> &h_flags, int k, bool top);

/// Everything a single ablation or sweep run needs. Model d/m/C are filled
/// in per run from the generated data and assembled semantic matrix.
struct HarnessConfig {
  SyntheticSpec data;  // means/scales are ignored when redraw_clusters
  WsciConfig model;
  bool redraw_clusters = true;  // re-draw cluster means per run seed
  double mean_range = 0.75;
  double cluster_scale = 0.25;
  int test_per_class = 50;
  int attr_width = 5;
  int gmm_components = 16;
  int transform_rows = 8;  // 0 means K/2
  double beta = 100.0;
  int gmm_max_iters = 100;
  double gmm_tol = 1e-6;
  int precision_k = 5;
  bool record_curves = true;
};

/// Random projection of the planted cluster means: the desk-scale stand-in
/// for annotated per-category attribute vectors.
Eigen::MatrixXd synthetic_attributes(const SyntheticSpec &spec, int width,
                                     std::uint64_t seed);

/// GMM codebook on jittered proposals, per-category mean responsibilities
/// with suppression, then the learned discriminative transform.
Eigen::MatrixXd visual_encoding_block(const Dataset &train, int jitter_count,
                                      double jitter_scale, int K,
                                      int target_rows, double beta,
                                      std::uint64_t seed, int gmm_max_iters,
                                      double gmm_tol);

/// attr + visual-encoding hybrid for one generated training set.
SemanticMatrix build_hybrid_semantics(const Dataset &train,
                                      const SyntheticSpec &spec,
                                      const HarnessConfig &config,
                                      std::uint64_t seed);

/// Trains every requested mode on identical per-seed data and reports
/// accuracy on a clean held-out set plus outlier diagnostics on the
/// training set.
std::vector<RunReport> run_ablation(const std::vector<AblationMode> &modes,
                                    const HarnessConfig &config,
                                    const std::vector<std::uint64_t> &seeds);

/// Rank-ordered noise windows: trains the mode on each per-class window
/// [start, start+window) of a larger pool and reports per-window accuracy.
std::vector<RunReport> noise_sweep(AblationMode mode,
                                   const std::vector<int> &start_indices,
                                   int window, const HarnessConfig &config,
                                   const std::vector<std::uint64_t> &seeds);

struct AggregateRow {
  AblationMode mode = AblationMode::kWsci;
  int window_start = 0;
  int runs = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // sample standard deviation
  double mean_auc = 0.0;
  double std_auc = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<RunReport> &reports);

std::string report_to_json(const RunReport &report);
RunReport report_from_json(const std::string &text);
void write_reports_jsonl(const std::string &path,
                         const std::vector<RunReport> &reports);
std::vector<RunReport> read_reports_jsonl(const std::string &path);
/// Flat summary: mode,seed,window,accuracy,auc
void write_summary_csv(const std::string &path,
                       const std::vector<RunReport> &reports);

}  // namespace wsci

#endif  // WSCI_EVAL_HPP_
