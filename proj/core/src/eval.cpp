// core/src/eval.cpp

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

#include "wsci/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "wsci/encoding.hpp"
#include "wsci/gmm.hpp"

namespace wsci {

namespace {

using nlohmann::json;

// sub-seed streams derived from one run seed
enum : std::uint64_t {
  kDataStream = 11,
  kMeansStream = 12,
  kTestStream = 13,
  kAttrStream = 14,
  kProposalStream = 15,
  kGmmStream = 16,
  kTransformStream = 17,
  kModelStream = 18,
  kPredictStream = 19,
  kClassifierStream = 20,
  kCurveStream = 21,
  kWindowStream = 22,
};

int argmax_lowest(const Eigen::VectorXd &v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

void check_h_flags(const std::vector<int> &h_flags) {
  for (int h : h_flags)
    if (h != 0 && h != 1)
      throw DomainError("metric requires known h flags (0 or 1)");
}

/// One-hidden-layer softmax classifier on the raw feature, used by the
/// sim1/sim2 top flows.
class ClassifierMlp {
 public:
  ClassifierMlp(int d, int width, int C, std::uint64_t seed)
      : hidden_(store_, "cls.hidden", d, width, Activation::kTanh),
        out_(store_, "cls.out", width, C, Activation::kIdentity) {
    std::mt19937_64 rng(seed);
    init_params(store_, rng);
  }

  Eigen::VectorXd log_probs(const Eigen::VectorXd &x) const {
    LayerCache ch, co;
    const Eigen::VectorXd logits =
        out_.forward(store_, hidden_.forward(store_, x, ch), co);
    const double m = logits.maxCoeff();
    const double lse = m + std::log((logits.array() - m).exp().sum());
    return logits.array() - lse;
  }

  /// Weighted softmax loss -w (log p(c|x) + log C); accumulates gradients
  /// with the weight treated as a constant.
  double weighted_loss_and_grad(const Eigen::VectorXd &x, int label, double w,
                                double log_c) {
    LayerCache ch, co;
    const Eigen::VectorXd h = hidden_.forward(store_, x, ch);
    const Eigen::VectorXd logits = out_.forward(store_, h, co);
    const double m = logits.maxCoeff();
    const double lse = m + std::log((logits.array() - m).exp().sum());
    const Eigen::VectorXd probs = (logits.array() - (lse)).exp();
    Eigen::VectorXd dlogits = w * probs;
    dlogits[label] -= w;
    hidden_.backward(store_, out_.backward(store_, dlogits, co), ch);
    return -w * ((logits[label] - lse) + log_c);
  }

  ParamStore &params() { return store_; }

 private:
  ParamStore store_;
  DenseLayer hidden_, out_;
};

/// Joint trainer for the split-flow ablations: a VAE in the bottom flow
/// (plain for sim1, semantic for sim2) whose batch-normalized reconstruction
/// densities weight an independent classifier on x in the top flow.
std::vector<double> train_sim(AblationMode mode, WsciModel &vae,
                              ClassifierMlp &cls,
                              std::span<const Instance> data,
                              const Eigen::MatrixXd &A) {
  const WsciConfig &cfg = vae.config();
  const double log_c = std::log(static_cast<double>(cfg.C));
  AdamState vae_adam(vae.params(), cfg.base_rate, cfg.rate_decay);
  AdamState cls_adam(cls.params(), cfg.base_rate, cfg.rate_decay);

  const int n = static_cast<int>(data.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> epoch_losses;
  epoch_losses.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 2 * epoch));
    std::mt19937_64 eps_rng(mix_seed(cfg.seed, 2 * epoch + 1));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double total_loss = 0.0;
    for (int start = 0; start < n; start += cfg.batch) {
      const int len = std::min(cfg.batch, n - start);
      Eigen::VectorXd log_p(len);
      std::vector<const Instance *> batch(len);
      for (int i = 0; i < len; ++i) {
        const Instance &inst = data[order[start + i]];
        batch[i] = &inst;
        const Eigen::VectorXd eps = Eigen::VectorXd::NullaryExpr(
            cfg.m, [&](Eigen::Index) { return normal(eps_rng); });

        ForwardCaches fc;
        const GaussianPosterior q = vae.encode(*inst.x, fc);
        const LatentSample s = reparameterize(q, eps);
        const DecoderOutput out = vae.decode(s.z, fc);
        log_p[i] = recon_log_density(*inst.x, out);

        const Eigen::VectorXd dmu_x = -(*inst.x - out.mu_x);
        const Eigen::VectorXd dz_rec = vae.backward_through_decoder(dmu_x, fc);
        if (mode == AblationMode::kSim1) {
          total_loss += kl_standard_normal(q) - log_p[i];
          // KL gradient lands on the heads directly; the reconstruction
          // gradient arrives through the sampled z.
          const Eigen::VectorXd sigma = q.sigma();
          const Eigen::VectorXd dmu = dz_rec + q.mu;
          const Eigen::VectorXd dlog_var =
              0.5 * dz_rec.cwiseProduct(eps).cwiseProduct(sigma) +
              0.5 * (q.log_var.array().exp() - 1.0).matrix();
          vae.backward_encoder_heads(dmu, dlog_var, fc);
        } else {
          const Eigen::VectorXd probs = semantic_class_probs(s.z, A);
          total_loss +=
              -std::log(std::max(probs[inst.label],
                                 std::numeric_limits<double>::min())) -
              log_p[i];
          const Eigen::VectorXd dz =
              dz_rec - (A.col(inst.label) - A * probs);
          vae.backward_through_encoder(dz, eps, q, fc);
        }
      }

      const Eigen::VectorXd weights = normalize_batch_weights(log_p).tilde_p;
      for (int i = 0; i < len; ++i)
        total_loss += cls.weighted_loss_and_grad(*batch[i]->x, batch[i]->label,
                                                 weights[i], log_c);

      adam_update(vae_adam, vae.params(), epoch);
      adam_update(cls_adam, cls.params(), epoch);
    }
    epoch_losses.push_back(total_loss);
  }
  return epoch_losses;
}

std::vector<int> truth_labels(const Dataset &dataset) {
  std::vector<int> out;
  out.reserve(dataset.items.size());
  for (const auto &item : dataset.items) out.push_back(item.true_label);
  return out;
}

SyntheticSpec spec_for_seed(const HarnessConfig &config, std::uint64_t seed) {
  SyntheticSpec spec = config.data;
  spec.seed = mix_seed(seed, kDataStream);
  if (config.redraw_clusters) {
    const SyntheticSpec fresh =
        default_spec(mix_seed(seed, kMeansStream), spec.C, spec.d,
                     config.mean_range, config.cluster_scale);
    spec.means = fresh.means;
    spec.scales = fresh.scales;
  }
  return spec;
}

Dataset make_clean_test_set(const SyntheticSpec &train_spec,
                            const HarnessConfig &config, std::uint64_t seed) {
  SyntheticSpec spec = train_spec;
  spec.samples_per_class = config.test_per_class;
  spec.outlier_ratio = 0.0;
  spec.flip_ratio = 0.0;
  spec.seed = mix_seed(seed, kTestStream);
  return generate(spec);
}

RunReport run_single(AblationMode mode, const Dataset &train_data,
                     const Dataset &test_data, const SemanticMatrix &A,
                     const HarnessConfig &config, std::uint64_t seed,
                     int window_start) {
  WsciConfig wc = config.model;
  wc.d = train_data.d;
  wc.C = train_data.C;
  wc.m = A.dim();
  wc.seed = mix_seed(seed, kModelStream);

  const auto train_view = training_view(train_data);
  const auto test_view = training_view(test_data);
  const auto test_truth = truth_labels(test_data);

  RunReport report;
  report.mode = mode;
  report.seed = seed;
  report.window_start = window_start;

  Eigen::VectorXd scores;
  if (mode == AblationMode::kWsci || mode == AblationMode::kUnweighted) {
    WsciModel model(wc);
    const TrainMode tm = mode == AblationMode::kWsci ? TrainMode::kWsci
                                                     : TrainMode::kUnweighted;
    EpochObserver observer;
    if (config.record_curves) {
      observer = [&](const EpochStats &stats, const WsciModel &m) {
        const auto preds =
            predict_dataset(m, test_view, A.A, wc.l_predict,
                            mix_seed(seed, kCurveStream + stats.epoch));
        report.curves.push_back(
            {stats.epoch, stats.total_loss, accuracy(preds, test_truth)});
      };
    }
    const TrainResult tr = train(model, train_view, A.A, tm, observer);
    if (!config.record_curves)
      for (const auto &e : tr.epochs)
        report.curves.push_back({e.epoch, e.total_loss, -1.0});
    const auto preds = predict_dataset(model, test_view, A.A, wc.l_predict,
                                       mix_seed(seed, kPredictStream));
    report.accuracy = accuracy(preds, test_truth);
    scores = outlier_scores(model, train_view);
  } else {
    WsciModel vae(wc);
    ClassifierMlp cls(wc.d, wc.resolved_hidden(), wc.C,
                      mix_seed(seed, kClassifierStream));
    const auto losses = train_sim(mode, vae, cls, train_view, A.A);
    std::vector<Eigen::VectorXd> preds;
    preds.reserve(test_view.size());
    for (const auto &inst : test_view)
      preds.push_back(cls.log_probs(*inst.x).array().exp());
    report.accuracy = accuracy(preds, test_truth);
    for (std::size_t e = 0; e < losses.size(); ++e)
      report.curves.push_back({static_cast<int>(e), losses[e], -1.0});
    scores = outlier_scores(vae, train_view);
  }

  std::vector<int> h_flags;
  h_flags.reserve(train_data.items.size());
  bool has_noise = false, has_clean = false;
  for (const auto &item : train_data.items) {
    h_flags.push_back(item.h);
    has_noise |= item.h == 0;
    has_clean |= item.h == 1;
  }
  if (has_noise && has_clean) {
    report.auc = outlier_auc(scores, h_flags);
    report.precision_top_k =
        precision_at_k(scores, h_flags, config.precision_k, true);
    report.precision_bottom_k =
        precision_at_k(scores, h_flags, config.precision_k, false);
  } else {
    report.auc = -1.0;
    report.precision_top_k = -1.0;
    report.precision_bottom_k = -1.0;
  }
  double sum1 = 0.0, sum0 = 0.0;
  int n1 = 0, n0 = 0;
  for (std::size_t i = 0; i < h_flags.size(); ++i) {
    if (h_flags[i] == 1) {
      sum1 += scores[static_cast<Eigen::Index>(i)];
      ++n1;
    } else if (h_flags[i] == 0) {
      sum0 += scores[static_cast<Eigen::Index>(i)];
      ++n0;
    }
  }
  report.mean_p_non_outlier = n1 > 0 ? sum1 / n1 : -1.0;
  report.mean_p_noise = n0 > 0 ? sum0 / n0 : -1.0;
  return report;
}

json report_json(const RunReport &r) {
  json curves = json::array();
  for (const auto &c : r.curves)
    curves.push_back({{"epoch", c.epoch},
                      {"loss", c.loss},
                      {"eval_accuracy", c.eval_accuracy}});
  return json{{"mode", to_string(r.mode)},
              {"seed", r.seed},
              {"window", r.window_start},
              {"accuracy", r.accuracy},
              {"auc", r.auc},
              {"precision_top_k", r.precision_top_k},
              {"precision_bottom_k", r.precision_bottom_k},
              {"mean_p_non_outlier", r.mean_p_non_outlier},
              {"mean_p_noise", r.mean_p_noise},
              {"curves", curves}};
}

RunReport report_from(const json &j) {
  RunReport r;
  r.mode = ablation_mode_from_string(j.at("mode").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.window_start = j.at("window").get<int>();
  r.accuracy = j.at("accuracy").get<double>();
  r.auc = j.at("auc").get<double>();
  r.precision_top_k = j.at("precision_top_k").get<double>();
  r.precision_bottom_k = j.at("precision_bottom_k").get<double>();
  r.mean_p_non_outlier = j.at("mean_p_non_outlier").get<double>();
  r.mean_p_noise = j.at("mean_p_noise").get<double>();
  for (const auto &c : j.at("curves"))
    r.curves.push_back({c.at("epoch").get<int>(), c.at("loss").get<double>(),
                        c.at("eval_accuracy").get<double>()});
  return r;
}

}  // namespace

std::string to_string(AblationMode mode) {
  switch (mode) {
    case AblationMode::kWsci:
      return "wsci";
    case AblationMode::kSim1:
      return "sim1";
    case AblationMode::kSim2:
      return "sim2";
    case AblationMode::kUnweighted:
      return "unweighted";
  }
  throw DomainError("invalid ablation mode");
}

AblationMode ablation_mode_from_string(const std::string &name) {
  if (name == "wsci") return AblationMode::kWsci;
  if (name == "sim1") return AblationMode::kSim1;
  if (name == "sim2") return AblationMode::kSim2;
  if (name == "unweighted") return AblationMode::kUnweighted;
  throw DomainError("unknown ablation mode '" + name + "'");
}

double accuracy(const std::vector<Eigen::VectorXd> &predictions,
                const std::vector<int> &true_labels) {
  if (predictions.size() != true_labels.size())
    throw ShapeError("predictions and labels differ in length");
  if (predictions.empty()) throw DomainError("no predictions to score");
  int hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (true_labels[i] < 0)
      throw DomainError("accuracy requires known true labels");
    if (argmax_lowest(predictions[i]) == true_labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double outlier_auc(const Eigen::VectorXd &scores,
                   const std::vector<int> &h_flags) {
  const int n = static_cast<int>(scores.size());
  if (n != static_cast<int>(h_flags.size()))
    throw ShapeError("scores and flags differ in length");
  check_h_flags(h_flags);
  const long n1 = std::count(h_flags.begin(), h_flags.end(), 1);
  const long n0 = n - n1;
  if (n1 == 0 || n0 == 0)
    throw DomainError("AUC needs both non-outliers and noise instances");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return scores[a] < scores[b]; });
  // average ranks over ties, 1-based
  std::vector<double> rank(n, 0.0);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * (i + j) + 1.0;
    for (int k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double r1 = 0.0;
  for (int k = 0; k < n; ++k)
    if (h_flags[k] == 1) r1 += rank[k];
  const double u1 = r1 - 0.5 * static_cast<double>(n1) * (n1 + 1);
  return u1 / (static_cast<double>(n1) * static_cast<double>(n0));
}

double precision_at_k(const Eigen::VectorXd &scores,
                      const std::vector<int> &h_flags, int k, bool top) {
  const int n = static_cast<int>(scores.size());
  if (n != static_cast<int>(h_flags.size()))
    throw ShapeError("scores and flags differ in length");
  check_h_flags(h_flags);
  if (k < 1) throw DomainError("k must be >= 1");
  k = std::min(k, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return top ? scores[a] > scores[b] : scores[a] < scores[b];
  });
  int hits = 0;
  for (int i = 0; i < k; ++i)
    if (h_flags[order[i]] == (top ? 1 : 0)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

Eigen::MatrixXd synthetic_attributes(const SyntheticSpec &spec, int width,
                                     std::uint64_t seed) {
  if (width < spec.C)
    throw DomainError("attribute width must be >= C for distinct attributes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd projection(width, spec.d);
  for (int r = 0; r < width; ++r)
    for (int c = 0; c < spec.d; ++c)
      projection(r, c) = normal(rng) / std::sqrt(static_cast<double>(spec.d));
  Eigen::MatrixXd attrs(width, spec.C);
  for (int c = 0; c < spec.C; ++c) attrs.col(c) = projection * spec.means[c];
  // orthonormalize the category columns (modified Gram-Schmidt): attribute
  // vectors describe distinct categories, so their codes should not alias
  for (int c = 0; c < spec.C; ++c) {
    for (int p = 0; p < c; ++p)
      attrs.col(c) -= attrs.col(p).dot(attrs.col(c)) * attrs.col(p);
    const double norm = attrs.col(c).norm();
    if (norm < 1e-12)
      throw NumericalError("degenerate cluster means; attributes alias");
    attrs.col(c) /= norm;
  }
  return attrs;
}

Eigen::MatrixXd visual_encoding_block(const Dataset &train, int jitter_count,
                                      double jitter_scale, int K,
                                      int target_rows, double beta,
                                      std::uint64_t seed, int gmm_max_iters,
                                      double gmm_tol) {
  const auto proposals = proposals_by_label(train, jitter_count, jitter_scale,
                                            mix_seed(seed, kProposalStream));
  std::vector<Eigen::VectorXd> pool;
  for (const auto &group : proposals)
    pool.insert(pool.end(), group.begin(), group.end());
  const GmmModel gmm = gmm_fit(pool, K, mix_seed(seed, kGmmStream),
                               gmm_max_iters, gmm_tol);
  const auto encodings = encode_categories(proposals, gmm);
  const SeparationProblem problem = make_separation_problem(
      encodings, beta, target_rows, mix_seed(seed, kTransformStream));
  const TransformMatrix tm = learn_transform(problem);
  Eigen::MatrixXd block(tm.W.rows(), static_cast<Eigen::Index>(encodings.size()));
  for (std::size_t c = 0; c < encodings.size(); ++c)
    block.col(static_cast<Eigen::Index>(c)) = tm.W * encodings[c].gamma_bar;
  return block;
}

SemanticMatrix build_hybrid_semantics(const Dataset &train,
                                      const SyntheticSpec &spec,
                                      const HarnessConfig &config,
                                      std::uint64_t seed) {
  std::vector<std::pair<std::string, Eigen::MatrixXd>> blocks;
  if (config.attr_width > 0)
    blocks.emplace_back("attr",
                        synthetic_attributes(spec, config.attr_width,
                                             mix_seed(seed, kAttrStream)));
  blocks.emplace_back(
      "visual",
      visual_encoding_block(train, spec.jitter_count, spec.jitter_scale,
                            config.gmm_components, config.transform_rows,
                            config.beta, seed, config.gmm_max_iters,
                            config.gmm_tol));
  return hybrid_concat(blocks);
}

std::vector<RunReport> run_ablation(const std::vector<AblationMode> &modes,
                                    const HarnessConfig &config,
                                    const std::vector<std::uint64_t> &seeds) {
  if (modes.empty()) throw DomainError("no ablation modes requested");
  std::vector<RunReport> reports;
  reports.reserve(modes.size() * seeds.size());
  for (std::uint64_t seed : seeds) {
    const SyntheticSpec spec = spec_for_seed(config, seed);
    const Dataset train_data = generate(spec);
    const Dataset test_data = make_clean_test_set(spec, config, seed);
    const SemanticMatrix A =
        build_hybrid_semantics(train_data, spec, config, seed);
    for (AblationMode mode : modes)
      reports.push_back(
          run_single(mode, train_data, test_data, A, config, seed, 0));
  }
  return reports;
}

std::vector<RunReport> noise_sweep(AblationMode mode,
                                   const std::vector<int> &start_indices,
                                   int window, const HarnessConfig &config,
                                   const std::vector<std::uint64_t> &seeds) {
  std::vector<RunReport> reports;
  if (start_indices.empty()) return reports;
  for (std::uint64_t seed : seeds) {
    const SyntheticSpec spec = spec_for_seed(config, seed);
    const Dataset pool = generate(spec);
    const Dataset test_data = make_clean_test_set(spec, config, seed);
    for (int start : start_indices) {
      const Dataset window_data = rank_order_noise(pool, start, window);
      const std::uint64_t wseed =
          mix_seed(mix_seed(seed, kWindowStream), static_cast<std::uint64_t>(start));
      const SemanticMatrix A =
          build_hybrid_semantics(window_data, spec, config, wseed);
      reports.push_back(
          run_single(mode, window_data, test_data, A, config, seed, start));
    }
  }
  return reports;
}

std::vector<AggregateRow> aggregate(const std::vector<RunReport> &reports) {
  std::map<std::pair<int, int>, std::vector<const RunReport *>> groups;
  for (const auto &r : reports)
    groups[{static_cast<int>(r.mode), r.window_start}].push_back(&r);
  std::vector<AggregateRow> rows;
  for (const auto &[key, group] : groups) {
    AggregateRow row;
    row.mode = static_cast<AblationMode>(key.first);
    row.window_start = key.second;
    row.runs = static_cast<int>(group.size());
    auto stats = [&](auto getter, double *mean, double *stddev) {
      std::vector<double> xs;
      for (const auto *r : group) {
        const double v = getter(*r);
        if (v >= 0.0) xs.push_back(v);
      }
      if (xs.empty()) {
        *mean = -1.0;
        *stddev = 0.0;
        return;
      }
      double m = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
      double ss = 0.0;
      for (double v : xs) ss += (v - m) * (v - m);
      *mean = m;
      *stddev = xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1)) : 0.0;
    };
    stats([](const RunReport &r) { return r.accuracy; }, &row.mean_accuracy,
          &row.std_accuracy);
    stats([](const RunReport &r) { return r.auc; }, &row.mean_auc,
          &row.std_auc);
    rows.push_back(row);
  }
  return rows;
}

std::string report_to_json(const RunReport &report) {
  return report_json(report).dump();
}

RunReport report_from_json(const std::string &text) {
  try {
    return report_from(json::parse(text));
  } catch (const json::exception &e) {
    throw ParseError(std::string("bad report JSON: ") + e.what());
  }
}

void write_reports_jsonl(const std::string &path,
                         const std::vector<RunReport> &reports) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write reports to '" + path + "'");
  for (const auto &r : reports) out << report_to_json(r) << "\n";
}

std::vector<RunReport> read_reports_jsonl(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open reports file '" + path + "'");
  std::vector<RunReport> reports;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      reports.push_back(report_from_json(line));
    } catch (const Error &e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return reports;
}

void write_summary_csv(const std::string &path,
                       const std::vector<RunReport> &reports) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write summary to '" + path + "'");
  out << "mode,seed,window,accuracy,auc\n";
  for (const auto &r : reports) {
    std::ostringstream row;
    row << to_string(r.mode) << "," << r.seed << "," << r.window_start << ","
        << r.accuracy << "," << r.auc;
    out << row.str() << "\n";
  }
}

}  // namespace wsci
