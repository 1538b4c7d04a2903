// core/include/wsci/data.hpp

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

#ifndef WSCI_DATA_HPP_
#define WSCI_DATA_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wsci/errors.hpp"

namespace wsci {

/// A feature vector with its (possibly noisy) label and the generator's
/// hidden ground truth. Labels are 0-based in memory, 1-based on disk.
struct LabeledFeature {
  Eigen::VectorXd x;
  int label = 0;
  /// 1 non-outlier, 0 label noise, -1 unknown (no truth columns).
  int h = -1;
  /// True category for h=1 instances; source cluster for flips; -1 when the
  /// instance belongs to no training category or truth is unknown.
  int true_label = -1;
};

struct Dataset {
  int d = 0;
  int C = 0;
  bool has_truth = false;
  std::vector<LabeledFeature> items;

  std::size_t size() const { return items.size(); }
};

/// Planted-cluster generator settings. Ratios are exact per-class quotas.
struct SyntheticSpec {
  int C = 5;
  int d = 16;
  std::vector<Eigen::VectorXd> means;  // one per class
  std::vector<double> scales;          // one per class
  int samples_per_class = 200;
  double outlier_ratio = 0.3;
  double flip_ratio = 0.05;
  int jitter_count = 3;
  double jitter_scale = 0.25;
  std::uint64_t seed = 7;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Spec with C=5, d=16 defaults and cluster means drawn uniformly from
/// [-mean_range, mean_range]^d under the given seed; all scales 1.
SyntheticSpec default_spec(std::uint64_t seed, int C = 5, int d = 16,
                           double mean_range = 0.75, double scale = 0.25);

/// Draws per-class clusters plus exact quotas of outliers (uniform over an
/// enclosing box, rejected until at least 2 cluster-scales from every mean)
/// and label flips. Within each class the items are emitted in search-rank
/// order: clean first, flips next, outliers last, shuffled within each tier.
Dataset generate(const SyntheticSpec &spec);

/// Per-class window [start_index, start_index + window) of the rank order
/// established by generate(); start_index is 1-based to match s(i) settings.
Dataset rank_order_noise(const Dataset &dataset, int start_index, int window);

Dataset load_features(const std::string &path);
void save_features(const Dataset &dataset, const std::string &path);

/// Seeded stratified split (by true label where known, else noisy label).
std::pair<Dataset, Dataset> split(const Dataset &dataset, double test_fraction,
                                  std::uint64_t seed);

/// What training is allowed to see: the feature and its noisy label.
struct Instance {
  const Eigen::VectorXd *x = nullptr;
  int label = 0;
};

std::vector<Instance> training_view(const Dataset &dataset);

/// Jittered proposal features per category (stand-in for region proposals),
/// grouped by the noisy label.
std::vector<std::vector<Eigen::VectorXd>> proposals_by_label(
    const Dataset &dataset, int jitter_count, double jitter_scale,
    std::uint64_t seed);

}  // namespace wsci

#endif  // WSCI_DATA_HPP_
