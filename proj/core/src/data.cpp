// core/src/data.cpp

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

#include "wsci/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "text_format.hpp"
#include "wsci/nn.hpp"

namespace wsci {

namespace {

constexpr int kMaxRejectionAttempts = 10000;

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream ss(line);
  while (std::getline(ss, tok, ',')) {
    // trim surrounding spaces
    const auto b = tok.find_first_not_of(" \t\r");
    const auto e = tok.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (C < 1) throw ConfigError("C must be >= 1");
  if (d < 1) throw ConfigError("d must be >= 1");
  if (samples_per_class < 1)
    throw ConfigError("samples_per_class must be >= 1");
  if (!(outlier_ratio >= 0.0 && outlier_ratio < 1.0))
    throw ConfigError("outlier_ratio must lie in [0, 1)");
  if (!(flip_ratio >= 0.0 && flip_ratio < 1.0))
    throw ConfigError("flip_ratio must lie in [0, 1)");
  if (outlier_ratio + flip_ratio >= 1.0)
    throw ConfigError("outlier_ratio + flip_ratio must be < 1");
  if (static_cast<int>(means.size()) != C)
    throw ConfigError("means must hold one vector per class");
  if (static_cast<int>(scales.size()) != C)
    throw ConfigError("scales must hold one value per class");
  for (const auto &mu : means)
    if (mu.size() != d) throw ConfigError("means must have dimension d");
  for (double s : scales)
    if (!(s > 0.0)) throw ConfigError("scales must be positive");
  if (jitter_count < 0) throw ConfigError("jitter_count must be >= 0");
  if (jitter_scale < 0.0) throw ConfigError("jitter_scale must be >= 0");
  if (flip_ratio > 0.0 && C < 2)
    throw ConfigError("flip_ratio requires C >= 2");
}

SyntheticSpec default_spec(std::uint64_t seed, int C, int d, double mean_range,
                           double scale) {
  SyntheticSpec spec;
  spec.C = C;
  spec.d = d;
  spec.seed = seed;
  std::mt19937_64 rng(mix_seed(seed, 0xc1u));
  std::uniform_real_distribution<double> dist(-mean_range, mean_range);
  spec.means.resize(C);
  spec.scales.assign(C, scale);
  for (int c = 0; c < C; ++c) {
    spec.means[c] = Eigen::VectorXd::NullaryExpr(
        d, [&](Eigen::Index) { return dist(rng); });
  }
  return spec;
}

Dataset generate(const SyntheticSpec &spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  double max_scale = 0.0;
  double box = 0.0;
  for (int c = 0; c < spec.C; ++c) {
    max_scale = std::max(max_scale, spec.scales[c]);
    box = std::max(box, spec.means[c].cwiseAbs().maxCoeff());
  }
  box += 6.0 * max_scale;
  std::uniform_real_distribution<double> box_dist(-box, box);

  Dataset out;
  out.d = spec.d;
  out.C = spec.C;
  out.has_truth = true;

  const int n = spec.samples_per_class;
  for (int c = 0; c < spec.C; ++c) {
    const int n_out = static_cast<int>(std::llround(spec.outlier_ratio * n));
    const int n_flip = static_cast<int>(std::llround(spec.flip_ratio * n));
    const int n_clean = n - n_out - n_flip;
    if (n_clean < 0)
      throw ConfigError("outlier_ratio and flip_ratio leave no clean quota");

    auto cluster_draw = [&](int k) {
      Eigen::VectorXd x(spec.d);
      for (int j = 0; j < spec.d; ++j)
        x[j] = spec.means[k][j] + spec.scales[k] * normal(rng);
      return x;
    };

    std::vector<LabeledFeature> clean(n_clean), flips(n_flip), outliers(n_out);
    for (auto &item : clean) {
      item.x = cluster_draw(c);
      item.label = c;
      item.h = 1;
      item.true_label = c;
    }
    std::uniform_int_distribution<int> other(0, spec.C - 2);
    for (auto &item : flips) {
      int t = other(rng);
      if (t >= c) ++t;
      item.x = cluster_draw(t);
      item.label = c;
      item.h = 0;
      item.true_label = t;
    }
    for (auto &item : outliers) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
        Eigen::VectorXd x(spec.d);
        for (int j = 0; j < spec.d; ++j) x[j] = box_dist(rng);
        bool far = true;
        for (int k = 0; k < spec.C; ++k) {
          if ((x - spec.means[k]).norm() < 2.0 * spec.scales[k]) {
            far = false;
            break;
          }
        }
        if (far) {
          item.x = std::move(x);
          placed = true;
          break;
        }
      }
      if (!placed)
        throw GenerationError(
            "could not place an outlier outside every cluster after " +
            std::to_string(kMaxRejectionAttempts) + " attempts");
      item.label = c;
      item.h = 0;
      item.true_label = -1;
    }

    std::shuffle(clean.begin(), clean.end(), rng);
    std::shuffle(flips.begin(), flips.end(), rng);
    std::shuffle(outliers.begin(), outliers.end(), rng);
    for (auto &v : {&clean, &flips, &outliers})
      for (auto &item : *v) out.items.push_back(std::move(item));
  }
  return out;
}

Dataset rank_order_noise(const Dataset &dataset, int start_index, int window) {
  if (start_index < 1) throw DomainError("start_index is 1-based");
  if (window < 1) throw DomainError("window must be >= 1");
  std::vector<std::vector<std::size_t>> pools(dataset.C);
  for (std::size_t i = 0; i < dataset.items.size(); ++i) {
    const int c = dataset.items[i].label;
    if (c < 0 || c >= dataset.C)
      throw DomainError("label out of range in dataset");
    pools[c].push_back(i);
  }
  Dataset out;
  out.d = dataset.d;
  out.C = dataset.C;
  out.has_truth = dataset.has_truth;
  for (int c = 0; c < dataset.C; ++c) {
    const auto &pool = pools[c];
    const std::size_t start = static_cast<std::size_t>(start_index - 1);
    if (start + window > pool.size())
      throw DomainError("window [" + std::to_string(start_index) + ", " +
                        std::to_string(start_index + window) +
                        ") exceeds the pool of class " + std::to_string(c + 1));
    for (int k = 0; k < window; ++k)
      out.items.push_back(dataset.items[pool[start + k]]);
  }
  return out;
}

Dataset load_features(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open feature file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty feature file", 1);

  Dataset out;
  {
    std::istringstream hs(line);
    std::string tok;
    int seen = 0;
    while (hs >> tok) {
      int value = 0;
      if (tok.rfind("d=", 0) == 0 && detail::parse_int(tok.substr(2), &value)) {
        out.d = value;
      } else if (tok.rfind("C=", 0) == 0 &&
                 detail::parse_int(tok.substr(2), &value)) {
        out.C = value;
      } else if (tok.rfind("truth=", 0) == 0 &&
                 detail::parse_int(tok.substr(6), &value)) {
        out.has_truth = value != 0;
      } else {
        throw ParseError("unrecognized header token '" + tok + "'", 1);
      }
      ++seen;
    }
    if (seen != 3 || out.d < 1 || out.C < 1)
      throw ParseError("header must read 'd=<int> C=<int> truth=<0|1>'", 1);
  }

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto toks = split_csv(line);
    const std::size_t expected =
        1 + static_cast<std::size_t>(out.d) + (out.has_truth ? 2 : 0);
    if (toks.size() != expected)
      throw ShapeError("row with " + std::to_string(toks.size()) +
                       " fields at line " + std::to_string(lineno) +
                       " is inconsistent with header d=" +
                       std::to_string(out.d) + " (expected " +
                       std::to_string(expected) + " fields)");
    LabeledFeature item;
    int label = 0;
    if (!detail::parse_int(toks[0], &label) || label < 1 || label > out.C)
      throw ParseError("bad label '" + toks[0] + "'", lineno);
    item.label = label - 1;
    item.x.resize(out.d);
    for (int j = 0; j < out.d; ++j) {
      double v = 0;
      if (!detail::parse_double(toks[1 + j], &v))
        throw ParseError("bad value '" + toks[1 + j] + "'", lineno);
      item.x[j] = v;
    }
    if (out.has_truth) {
      int h = 0, t = 0;
      if (!detail::parse_int(toks[1 + out.d], &h) || (h != 0 && h != 1))
        throw ParseError("bad h flag '" + toks[1 + out.d] + "'", lineno);
      if (!detail::parse_int(toks[2 + out.d], &t) || t < 0 || t > out.C)
        throw ParseError("bad true label '" + toks[2 + out.d] + "'", lineno);
      item.h = h;
      item.true_label = t - 1;  // 0 on disk means "no training category"
      if (h == 1 && item.true_label != item.label)
        throw ParseError("h=1 row whose true label differs from its label",
                         lineno);
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

void save_features(const Dataset &dataset, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write feature file '" + path + "'");
  out << "d=" << dataset.d << " C=" << dataset.C
      << " truth=" << (dataset.has_truth ? 1 : 0) << "\n";
  for (const auto &item : dataset.items) {
    out << (item.label + 1);
    for (int j = 0; j < dataset.d; ++j)
      out << "," << detail::fmt_double(item.x[j]);
    if (dataset.has_truth) {
      if (item.h != 0 && item.h != 1)
        throw DomainError("dataset claims truth but an item has unknown h");
      out << "," << item.h << "," << (item.true_label + 1);
    }
    out << "\n";
  }
}

std::pair<Dataset, Dataset> split(const Dataset &dataset, double test_fraction,
                                  std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw DomainError("test_fraction must lie in (0, 1)");
  // Stratum: true label where known, otherwise the noisy label.
  auto stratum_of = [&](const LabeledFeature &item) {
    if (dataset.has_truth && item.h == 1) return item.true_label;
    return dataset.C + item.label;
  };
  std::vector<std::vector<std::size_t>> strata(2 * dataset.C);
  for (std::size_t i = 0; i < dataset.items.size(); ++i)
    strata[stratum_of(dataset.items[i])].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<char> in_test(dataset.items.size(), 0);
  for (auto &stratum : strata) {
    if (stratum.empty()) continue;
    if (stratum.size() < 2)
      throw DomainError("a class has fewer than 2 instances; cannot split");
    std::shuffle(stratum.begin(), stratum.end(), rng);
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(stratum.size())));
    for (std::size_t k = 0; k < n_test; ++k) in_test[stratum[k]] = 1;
  }

  Dataset train, test;
  train.d = test.d = dataset.d;
  train.C = test.C = dataset.C;
  train.has_truth = test.has_truth = dataset.has_truth;
  for (std::size_t i = 0; i < dataset.items.size(); ++i)
    (in_test[i] ? test : train).items.push_back(dataset.items[i]);
  return {std::move(train), std::move(test)};
}

std::vector<Instance> training_view(const Dataset &dataset) {
  std::vector<Instance> view;
  view.reserve(dataset.items.size());
  for (const auto &item : dataset.items) view.push_back({&item.x, item.label});
  return view;
}

std::vector<std::vector<Eigen::VectorXd>> proposals_by_label(
    const Dataset &dataset, int jitter_count, double jitter_scale,
    std::uint64_t seed) {
  if (jitter_count < 1) throw DomainError("jitter_count must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<Eigen::VectorXd>> groups(dataset.C);
  for (const auto &item : dataset.items) {
    for (int k = 0; k < jitter_count; ++k) {
      Eigen::VectorXd p(dataset.d);
      for (int j = 0; j < dataset.d; ++j)
        p[j] = item.x[j] + jitter_scale * normal(rng);
      groups[item.label].push_back(std::move(p));
    }
  }
  return groups;
}

}  // namespace wsci
