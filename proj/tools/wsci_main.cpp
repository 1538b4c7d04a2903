// tools/wsci_main.cpp

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

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "wsci/data.hpp"
#include "wsci/encoding.hpp"
#include "wsci/errors.hpp"
#include "wsci/eval.hpp"
#include "wsci/gmm.hpp"
#include "wsci/model.hpp"
#include "wsci/semantic_matrix.hpp"

namespace {

using namespace wsci;

// exit codes: 0 success, 1 usage, 2 data error, 3 numerical error
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDataError = 2;
constexpr int kNumericalError = 3;

// fixed sub-seed streams so every command is reproducible from one seed
enum : std::uint64_t {
  kCliTestStream = 101,
  kCliProposalStream = 102,
  kCliGmmStream = 103,
  kCliTransformStream = 104,
  kCliPredictStream = 105,
};

/// Flat key=value config support: every `key=value` line becomes `--key=value`
/// unless the flag already appears on the command line, so explicit flags win.
/// Lines starting with '#' are comments.
std::vector<std::string> expand_config(const std::vector<std::string> &args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::vector<std::string> expanded = args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config lines must read key=value", lineno);
    const auto last = line.find_last_not_of(" \t\r");
    std::string key = line.substr(first, eq - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1, last - eq);
    const auto vfirst = value.find_first_not_of(" \t");
    value = vfirst == std::string::npos ? "" : value.substr(vfirst);
    if (key.empty() || key == "config")
      throw ParseError("bad config key at line " + std::to_string(lineno),
                       lineno);
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto &arg : args)
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) given = true;
    if (!given) expanded.push_back(flag + "=" + value);
  }
  return expanded;
}

/// WSCI_SEED overrides whatever the flags or config file provided.
void apply_env_seed(std::uint64_t &seed) {
  if (const char *env = std::getenv("WSCI_SEED")) {
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw ConfigError("WSCI_SEED must be an unsigned integer");
    seed = v;
  }
}

int run_guarded(const std::function<void()> &body) {
  try {
    body();
    return kOk;
  } catch (const NumericalError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}

struct DataArgs {
  int classes = 5;
  int dim = 16;
  int samples_per_class = 200;
  double outlier_ratio = 0.3;
  double flip_ratio = 0.05;
  double mean_range = 0.75;
  double cluster_scale = 0.25;
  int jitter_count = 3;
  double jitter_scale = 0.25;
  std::uint64_t seed = 7;
};

void add_data_options(CLI::App *cmd, DataArgs &args) {
  cmd->add_option("--classes", args.classes, "Number of categories C");
  cmd->add_option("--dim", args.dim, "Feature dimension d");
  cmd->add_option("--samples-per-class", args.samples_per_class,
                  "Instances per class");
  cmd->add_option("--outlier-ratio", args.outlier_ratio,
                  "Fraction of outliers per class");
  cmd->add_option("--flip-ratio", args.flip_ratio,
                  "Fraction of label flips per class");
  cmd->add_option("--mean-range", args.mean_range,
                  "Cluster means drawn uniformly from [-range, range]^d");
  cmd->add_option("--cluster-scale", args.cluster_scale,
                  "Cluster standard deviation");
  cmd->add_option("--jitter-count", args.jitter_count,
                  "Proposals per instance");
  cmd->add_option("--jitter-scale", args.jitter_scale,
                  "Proposal jitter standard deviation");
  cmd->add_option("--seed", args.seed, "Global seed");
}

SyntheticSpec make_spec(const DataArgs &args) {
  SyntheticSpec spec = default_spec(args.seed, args.classes, args.dim,
                                    args.mean_range, args.cluster_scale);
  spec.samples_per_class = args.samples_per_class;
  spec.outlier_ratio = args.outlier_ratio;
  spec.flip_ratio = args.flip_ratio;
  spec.jitter_count = args.jitter_count;
  spec.jitter_scale = args.jitter_scale;
  return spec;
}

/// Labels usable as ground truth: h=1 rows when truth is recorded,
/// otherwise every row's label (a clean evaluation file).
void eval_views(const Dataset &ds, std::vector<Instance> *view,
                std::vector<int> *truth) {
  const auto full = training_view(ds);
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    if (ds.has_truth && ds.items[i].h != 1) continue;
    view->push_back(full[i]);
    truth->push_back(ds.items[i].label);
  }
  if (view->empty()) throw DomainError("no trustworthy rows for evaluation");
}

GmmModel fit_gmm_on_proposals(const Dataset &ds, int K, int max_iters,
                              double tol, int jitter_count,
                              double jitter_scale, std::uint64_t seed) {
  const auto groups = proposals_by_label(
      ds, jitter_count, jitter_scale, mix_seed(seed, kCliProposalStream));
  std::vector<Eigen::VectorXd> pool;
  for (const auto &g : groups) pool.insert(pool.end(), g.begin(), g.end());
  return gmm_fit(pool, K, mix_seed(seed, kCliGmmStream), max_iters, tol);
}

std::vector<std::uint64_t> parse_seeds(const std::vector<std::uint64_t> &seeds) {
  if (std::getenv("WSCI_SEED") != nullptr) {
    std::uint64_t s = 0;
    apply_env_seed(s);
    return {s};
  }
  return seeds;
}

void print_aggregates(const std::vector<RunReport> &reports) {
  for (const auto &row : aggregate(reports)) {
    std::cout << to_string(row.mode);
    if (row.window_start > 0) std::cout << " s(" << row.window_start << ")";
    std::cout << ": accuracy " << row.mean_accuracy << " +- "
              << row.std_accuracy;
    if (row.mean_auc >= 0.0)
      std::cout << ", outlier AUC " << row.mean_auc << " +- " << row.std_auc;
    std::cout << " over " << row.runs << " runs\n";
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"WSCI: noisy-label robust classification with category-level "
               "semantic supervision"};
  app.require_subcommand(1);
  int exit_code = kOk;
  auto config_path = std::make_shared<std::string>();

  // ---- gen-data ----------------------------------------------------------
  auto *gen = app.add_subcommand("gen-data",
                                 "Generate a synthetic noisy feature file");
  auto gen_data = std::make_shared<DataArgs>();
  auto gen_out = std::make_shared<std::string>();
  auto gen_test_out = std::make_shared<std::string>();
  auto gen_test_n = std::make_shared<int>(50);
  add_data_options(gen, *gen_data);
  gen->add_option("--out", *gen_out, "Output feature file")->required();
  gen->add_option("--test-out", *gen_test_out,
                  "Also write a clean test feature file here");
  gen->add_option("--test-per-class", *gen_test_n,
                  "Clean test instances per class");
  gen->add_option("--config", *config_path,
                  "Flat key=value config file; flags override");
  gen->callback([=, &exit_code] {
    exit_code = run_guarded([&] {
      apply_env_seed(gen_data->seed);
      const SyntheticSpec spec = make_spec(*gen_data);
      save_features(generate(spec), *gen_out);
      std::cout << "wrote " << *gen_out << " (C=" << spec.C
                << " d=" << spec.d << ", " << spec.samples_per_class
                << " per class)\n";
      if (!gen_test_out->empty()) {
        SyntheticSpec test_spec = spec;
        test_spec.samples_per_class = *gen_test_n;
        test_spec.outlier_ratio = 0.0;
        test_spec.flip_ratio = 0.0;
        test_spec.seed = mix_seed(spec.seed, kCliTestStream);
        save_features(generate(test_spec), *gen_test_out);
        std::cout << "wrote " << *gen_test_out << " (clean test set)\n";
      }
    });
  });

  // ---- fit-gmm -----------------------------------------------------------
  auto *fit = app.add_subcommand("fit-gmm",
                                 "Fit the GMM visual codebook on proposals");
  auto fit_features = std::make_shared<std::string>();
  auto fit_out = std::make_shared<std::string>();
  auto fit_k = std::make_shared<int>(256);
  auto fit_iters = std::make_shared<int>(200);
  auto fit_tol = std::make_shared<double>(1e-6);
  auto fit_jc = std::make_shared<int>(3);
  auto fit_js = std::make_shared<double>(0.25);
  auto fit_seed = std::make_shared<std::uint64_t>(7);
  fit->add_option("--features", *fit_features, "Input feature file")
      ->required();
  fit->add_option("--k", *fit_k, "Mixture components");
  fit->add_option("--max-iters", *fit_iters, "EM iteration cap");
  fit->add_option("--tol", *fit_tol, "Mean log-likelihood improvement stop");
  fit->add_option("--jitter-count", *fit_jc, "Proposals per instance");
  fit->add_option("--jitter-scale", *fit_js, "Proposal jitter scale");
  fit->add_option("--seed", *fit_seed, "Global seed");
  fit->add_option("--out", *fit_out, "Output GMM file")->required();
  fit->add_option("--config", *config_path,
                  "Flat key=value config file; flags override");
  fit->callback([=, &exit_code] {
    exit_code = run_guarded([&] {
      apply_env_seed(*fit_seed);
      const Dataset ds = load_features(*fit_features);
      const GmmModel gmm = fit_gmm_on_proposals(ds, *fit_k, *fit_iters,
                                                *fit_tol, *fit_jc, *fit_js,
                                                *fit_seed);
      save_gmm(gmm, *fit_out);
      std::cout << "wrote " << *fit_out << " (K=" << gmm.components()
                << ", EM iterations " << gmm.stats.iterations
                << ", reseeds " << gmm.stats.reseeds << ")\n";
    });
  });

  // ---- encode ------------------------------------------------------------
  auto *enc = app.add_subcommand(
      "encode", "Build the visual-encoding semantic block from features");
  auto enc_features = std::make_shared<std::string>();
  auto enc_out = std::make_shared<std::string>();
  auto enc_gmm_in = std::make_shared<std::string>();
  auto enc_gmm_out = std::make_shared<std::string>();
  auto enc_k = std::make_shared<int>(256);
  auto enc_ktilde = std::make_shared<int>(128);
  auto enc_beta = std::make_shared<double>(100.0);
  auto enc_iters = std::make_shared<int>(200);
  auto enc_tol = std::make_shared<double>(1e-6);
  auto enc_jc = std::make_shared<int>(3);
  auto enc_js = std::make_shared<double>(0.25);
  auto enc_seed = std::make_shared<std::uint64_t>(7);
  enc->add_option("--features", *enc_features, "Input feature file")
      ->required();
  enc->add_option("--k", *enc_k, "Mixture components K");
  enc->add_option("--ktilde", *enc_ktilde, "Transform rows (encoding width)");
  enc->add_option("--beta", *enc_beta, "Orthonormality penalty weight");
  enc->add_option("--max-iters", *enc_iters, "EM iteration cap");
  enc->add_option("--tol", *enc_tol, "EM improvement stop");
  enc->add_option("--jitter-count", *enc_jc, "Proposals per instance");
  enc->add_option("--jitter-scale", *enc_js, "Proposal jitter scale");
  enc->add_option("--gmm-in", *enc_gmm_in, "Reuse a fitted GMM file");
  enc->add_option("--gmm-out", *enc_gmm_out, "Also write the fitted GMM here");
  enc->add_option("--seed", *enc_seed, "Global seed");
  enc->add_option("--out", *enc_out, "Output semantic matrix file")
      ->required();
  enc->add_option("--config", *config_path,
                  "Flat key=value config file; flags override");
  enc->callback([=, &exit_code] {
    exit_code = run_guarded([&] {
      apply_env_seed(*enc_seed);
      const Dataset ds = load_features(*enc_features);
      const auto groups = proposals_by_label(
          ds, *enc_jc, *enc_js, mix_seed(*enc_seed, kCliProposalStream));
      GmmModel gmm;
      if (!enc_gmm_in->empty()) {
        gmm = load_gmm(*enc_gmm_in);
      } else {
        std::vector<Eigen::VectorXd> pool;
        for (const auto &g : groups) pool.insert(pool.end(), g.begin(), g.end());
        gmm = gmm_fit(pool, *enc_k, mix_seed(*enc_seed, kCliGmmStream),
                      *enc_iters, *enc_tol);
      }
      if (!enc_gmm_out->empty()) save_gmm(gmm, *enc_gmm_out);
      const auto encodings = encode_categories(groups, gmm);
      const SeparationProblem problem = make_separation_problem(
          encodings, *enc_beta, *enc_ktilde,
          mix_seed(*enc_seed, kCliTransformStream));
      const TransformMatrix tm = learn_transform(problem);
      Eigen::MatrixXd block(tm.W.rows(),
                            static_cast<Eigen::Index>(encodings.size()));
      for (std::size_t c = 0; c < encodings.size(); ++c)
        block.col(static_cast<Eigen::Index>(c)) =
            tm.W * encodings[c].gamma_bar;
      save_semantic_matrix(hybrid_concat({{"visual", block}}), *enc_out);
      std::cout << "wrote " << *enc_out << " (block width " << tm.W.rows()
                << ", C=" << encodings.size() << ")\n";
    });
  });

  // ---- train -------------------------------------------------------------
  auto *tr = app.add_subcommand("train", "Train the WSCI model");
  auto tr_features = std::make_shared<std::string>();
  auto tr_semantic = std::make_shared<std::string>();
  auto tr_out = std::make_shared<std::string>();
  auto tr_metrics = std::make_shared<std::string>();
  auto tr_eval = std::make_shared<std::string>();
  auto tr_mode = std::make_shared<std::string>("wsci");
  auto tr_cfg = std::make_shared<WsciConfig>();
  tr->add_option("--features", *tr_features, "Training feature file")
      ->required();
  tr->add_option("--semantic", *tr_semantic, "Semantic matrix file")
      ->required();
  tr->add_option("--out", *tr_out, "Output checkpoint")->required();
  tr->add_option("--metrics", *tr_metrics, "Per-epoch metrics JSONL");
  tr->add_option("--eval-features", *tr_eval,
                 "Clean feature file for per-epoch accuracy");
  tr->add_option("--mode", *tr_mode, "wsci | unweighted")
      ->check(CLI::IsMember({"wsci", "unweighted"}));
  tr->add_option("--epochs", tr_cfg->epochs, "Training epochs");
  tr->add_option("--batch", tr_cfg->batch, "Mini-batch size");
  tr->add_option("--lambda", tr_cfg->lambda,
                 "Reconstruction trade-off (robust within [1e-6, 1e-4])");
  tr->add_option("--hidden", tr_cfg->hidden,
                 "Hidden width; 0 means round((d+m)/2)");
  tr->add_option("--l-predict", tr_cfg->l_predict, "Prediction samples L");
  tr->add_option("--base-rate", tr_cfg->base_rate, "Adam base rate");
  tr->add_option("--rate-decay", tr_cfg->rate_decay, "Per-epoch rate decay");
  tr->add_option("--seed", tr_cfg->seed, "Global seed");
  tr->add_option("--config", *config_path,
                  "Flat key=value config file; flags override");
  tr->callback([=, &exit_code] {
    exit_code = run_guarded([&] {
      apply_env_seed(tr_cfg->seed);
      const Dataset ds = load_features(*tr_features);
      const SemanticMatrix sm = load_semantic_matrix(*tr_semantic);
      if (sm.categories() != ds.C)
        throw ConfigError("semantic matrix has " +
                          std::to_string(sm.categories()) +
                          " categories, features have " +
                          std::to_string(ds.C));
      WsciConfig cfg = *tr_cfg;
      cfg.d = ds.d;
      cfg.m = sm.dim();
      cfg.C = ds.C;
      WsciModel model(cfg);
      const auto view = training_view(ds);

      Dataset eval_ds;  // owns the storage behind eval_view
      std::vector<Instance> eval_view;
      std::vector<int> eval_truth;
      if (!tr_eval->empty()) {
        eval_ds = load_features(*tr_eval);
        if (eval_ds.d != ds.d)
          throw ShapeError("eval features have a different dimension");
        eval_views(eval_ds, &eval_view, &eval_truth);
      }
      std::vector<int> h_flags;
      if (ds.has_truth)
        for (const auto &item : ds.items) h_flags.push_back(item.h);

      std::vector<nlohmann::json> metric_rows;
      EpochObserver observer = [&](const EpochStats &stats,
                                   const WsciModel &m) {
        nlohmann::json row{{"epoch", stats.epoch},
                           {"loss", stats.total_loss},
                           {"mean_tilde_p", stats.mean_tilde_p},
                           {"learning_rate", stats.learning_rate}};
        if (!eval_view.empty()) {
          const auto preds =
              predict_dataset(m, eval_view, sm.A, cfg.l_predict,
                              mix_seed(cfg.seed, 1000 + stats.epoch));
          row["eval_accuracy"] = accuracy(preds, eval_truth);
        }
        if (!h_flags.empty()) {
          const Eigen::VectorXd scores = outlier_scores(m, view);
          double s1 = 0, s0 = 0;
          int n1 = 0, n0 = 0;
          for (std::size_t i = 0; i < h_flags.size(); ++i) {
            if (h_flags[i] == 1) {
              s1 += scores[static_cast<Eigen::Index>(i)];
              ++n1;
            } else {
              s0 += scores[static_cast<Eigen::Index>(i)];
              ++n0;
            }
          }
          if (n1 > 0) row["mean_p_non_outlier"] = s1 / n1;
          if (n0 > 0) row["mean_p_noise"] = s0 / n0;
        }
        metric_rows.push_back(std::move(row));
      };

      const TrainMode mode = *tr_mode == "wsci" ? TrainMode::kWsci
                                                : TrainMode::kUnweighted;
      train(model, view, sm.A, mode, observer);
      save_checkpoint(model, *tr_out);
      if (!tr_metrics->empty()) {
        std::ofstream mout(*tr_metrics);
        if (!mout) throw Error("cannot write metrics '" + *tr_metrics + "'");
        for (const auto &row : metric_rows) mout << row.dump() << "\n";
      }
      std::cout << "wrote " << *tr_out << " (" << cfg.epochs << " epochs, mode "
                << *tr_mode << ")\n";
    });
  });

  // ---- predict -----------------------------------------------------------
  auto *pr = app.add_subcommand("predict",
                                "Average L sampled class-probability vectors");
  auto pr_checkpoint = std::make_shared<std::string>();
  auto pr_semantic = std::make_shared<std::string>();
  auto pr_features = std::make_shared<std::string>();
  auto pr_out = std::make_shared<std::string>();
  auto pr_l = std::make_shared<int>(0);
  auto pr_seed = std::make_shared<std::uint64_t>(7);
  pr->add_option("--checkpoint", *pr_checkpoint, "Model checkpoint")
      ->required();
  pr->add_option("--semantic", *pr_semantic, "Semantic matrix file")
      ->required();
  pr->add_option("--features", *pr_features, "Feature file to predict")
      ->required();
  pr->add_option("--l", *pr_l, "Samples per prediction; 0 uses the checkpoint");
  pr->add_option("--seed", *pr_seed, "Global seed");
  pr->add_option("--out", *pr_out, "Output CSV")->required();
  pr->add_option("--config", *config_path,
                  "Flat key=value config file; flags override");
  pr->callback([=, &exit_code] {
    exit_code = run_guarded([&] {
      apply_env_seed(*pr_seed);
      const WsciModel model = load_checkpoint(*pr_checkpoint);
      const SemanticMatrix sm = load_semantic_matrix(*pr_semantic);
      const Dataset ds = load_features(*pr_features);
      if (ds.d != model.config().d)
        throw ShapeError("features dimension differs from the checkpoint");
      if (sm.dim() != model.config().m)
        throw ShapeError("semantic matrix dimension differs from checkpoint");
      const int L = *pr_l > 0 ? *pr_l : model.config().l_predict;
      const auto view = training_view(ds);
      const auto preds = predict_dataset(model, view, sm.A, L,
                                         mix_seed(*pr_seed, kCliPredictStream));
      std::ofstream out(*pr_out);
      if (!out) throw Error("cannot write predictions '" + *pr_out + "'");
      out << "index,label";
      for (int c = 1; c <= ds.C; ++c) out << ",p_" << c;
      out << "\n";
      int hits = 0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        int best = 0;
        for (int c = 1; c < ds.C; ++c)
          if (preds[i][c] > preds[i][best]) best = c;
        hits += best == ds.items[i].label;
        out << i << "," << (best + 1);
        for (int c = 0; c < ds.C; ++c) out << "," << preds[i][c];
        out << "\n";
      }
      std::cout << "wrote " << *pr_out << " (L=" << L << ", agreement with "
                << "file labels " << double(hits) / preds.size() << ")\n";
    });
  });

  // ---- detect ------------------------------------------------------------
  auto *de = app.add_subcommand(
      "detect", "Rank instances by normalized reconstruction density");
  auto de_checkpoint = std::make_shared<std::string>();
  auto de_features = std::make_shared<std::string>();
  auto de_out = std::make_shared<std::string>();
  de->add_option("--checkpoint", *de_checkpoint, "Model checkpoint")
      ->required();
  de->add_option("--features", *de_features, "Feature file to score")
      ->required();
  de->add_option("--out", *de_out, "Ranked CSV (descending tilde_p)")
      ->required();
  de->add_option("--config", *config_path,
                  "Flat key=value config file; flags override");
  de->callback([=, &exit_code] {
    exit_code = run_guarded([&] {
      const WsciModel model = load_checkpoint(*de_checkpoint);
      const Dataset ds = load_features(*de_features);
      if (ds.d != model.config().d)
        throw ShapeError("features dimension differs from the checkpoint");
      const auto view = training_view(ds);
      const Eigen::VectorXd scores = outlier_scores(model, view);
      std::vector<int> order(static_cast<int>(scores.size()));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return scores[a] > scores[b]; });
      std::ofstream out(*de_out);
      if (!out) throw Error("cannot write ranking '" + *de_out + "'");
      out << "index,tilde_p\n";
      for (int idx : order) out << idx << "," << scores[idx] << "\n";
      std::cout << "wrote " << *de_out << " (" << scores.size()
                << " instances ranked)\n";
    });
  });

  // ---- ablate ------------------------------------------------------------
  auto *ab = app.add_subcommand("ablate",
                                "Run the WSCI / sim1 / sim2 / unweighted "
                                "comparison on synthetic data");
  auto ab_data = std::make_shared<DataArgs>();
  auto ab_modes = std::make_shared<std::vector<std::string>>(
      std::vector<std::string>{"wsci", "sim1", "sim2", "unweighted"});
  auto ab_seeds = std::make_shared<std::vector<std::uint64_t>>(
      std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  auto ab_jsonl = std::make_shared<std::string>();
  auto ab_csv = std::make_shared<std::string>();
  auto ab_harness = std::make_shared<HarnessConfig>();
  add_data_options(ab, *ab_data);
  ab->add_option("--modes", *ab_modes, "Modes to run")->delimiter(',');
  ab->add_option("--seeds", *ab_seeds, "Run seeds")->delimiter(',');
  ab->add_option("--test-per-class", ab_harness->test_per_class,
                 "Clean test instances per class");
  ab->add_option("--attr-width", ab_harness->attr_width,
                 "Synthetic attribute block width (0 disables)");
  ab->add_option("--gmm-k", ab_harness->gmm_components,
                 "Visual codebook components");
  ab->add_option("--ktilde", ab_harness->transform_rows,
                 "Visual encoding width; 0 means K/2");
  ab->add_option("--beta", ab_harness->beta, "Orthonormality penalty");
  ab->add_option("--epochs", ab_harness->model.epochs, "Training epochs");
  ab->add_option("--batch", ab_harness->model.batch, "Mini-batch size");
  ab->add_option("--lambda", ab_harness->model.lambda,
                 "Reconstruction trade-off");
  ab->add_option("--l-predict", ab_harness->model.l_predict,
                 "Prediction samples");
  ab->add_flag("--curves,!--no-curves", ab_harness->record_curves,
               "Record per-epoch accuracy curves");
  ab->add_option("--out-jsonl", *ab_jsonl, "Write per-run reports here");
  ab->add_option("--out-csv", *ab_csv, "Write the flat summary here");
  ab->add_option("--config", *config_path,
                  "Flat key=value config file; flags override");
  ab->callback([=, &exit_code] {
    exit_code = run_guarded([&] {
      HarnessConfig hc = *ab_harness;
      hc.data = make_spec(*ab_data);
      hc.mean_range = ab_data->mean_range;
      hc.cluster_scale = ab_data->cluster_scale;
      std::vector<AblationMode> modes;
      for (const auto &name : *ab_modes)
        modes.push_back(ablation_mode_from_string(name));
      const auto seeds = parse_seeds(*ab_seeds);
      const auto reports = run_ablation(modes, hc, seeds);
      if (!ab_jsonl->empty()) write_reports_jsonl(*ab_jsonl, reports);
      if (!ab_csv->empty()) write_summary_csv(*ab_csv, reports);
      print_aggregates(reports);
    });
  });

  // ---- sweep -------------------------------------------------------------
  auto *sw = app.add_subcommand(
      "sweep", "Noise-level sweep over rank-ordered training windows");
  auto sw_data = std::make_shared<DataArgs>();
  auto sw_mode = std::make_shared<std::string>("wsci");
  auto sw_starts = std::make_shared<std::vector<int>>(
      std::vector<int>{61, 106, 151});
  auto sw_window = std::make_shared<int>(150);
  auto sw_seeds = std::make_shared<std::vector<std::uint64_t>>(
      std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  auto sw_jsonl = std::make_shared<std::string>();
  auto sw_csv = std::make_shared<std::string>();
  auto sw_harness = std::make_shared<HarnessConfig>();
  sw_data->samples_per_class = 300;
  sw_data->outlier_ratio = 0.35;
  add_data_options(sw, *sw_data);
  sw->add_option("--mode", *sw_mode, "Mode to sweep")
      ->check(CLI::IsMember({"wsci", "sim1", "sim2", "unweighted"}));
  sw->add_option("--starts", *sw_starts, "1-based window starts s(i)")
      ->delimiter(',');
  sw->add_option("--window", *sw_window, "Window size per class");
  sw->add_option("--seeds", *sw_seeds, "Run seeds")->delimiter(',');
  sw->add_option("--test-per-class", sw_harness->test_per_class,
                 "Clean test instances per class");
  sw->add_option("--attr-width", sw_harness->attr_width,
                 "Synthetic attribute block width (0 disables)");
  sw->add_option("--gmm-k", sw_harness->gmm_components,
                 "Visual codebook components");
  sw->add_option("--ktilde", sw_harness->transform_rows,
                 "Visual encoding width; 0 means K/2");
  sw->add_option("--beta", sw_harness->beta, "Orthonormality penalty");
  sw->add_option("--epochs", sw_harness->model.epochs, "Training epochs");
  sw->add_option("--batch", sw_harness->model.batch, "Mini-batch size");
  sw->add_option("--lambda", sw_harness->model.lambda,
                 "Reconstruction trade-off");
  sw->add_option("--l-predict", sw_harness->model.l_predict,
                 "Prediction samples");
  sw->add_flag("--curves,!--no-curves", sw_harness->record_curves,
               "Record per-epoch accuracy curves");
  sw->add_option("--out-jsonl", *sw_jsonl, "Write per-run reports here");
  sw->add_option("--out-csv", *sw_csv, "Write the flat summary here");
  sw->add_option("--config", *config_path,
                  "Flat key=value config file; flags override");
  sw->callback([=, &exit_code] {
    exit_code = run_guarded([&] {
      HarnessConfig hc = *sw_harness;
      hc.data = make_spec(*sw_data);
      hc.mean_range = sw_data->mean_range;
      hc.cluster_scale = sw_data->cluster_scale;
      const auto seeds = parse_seeds(*sw_seeds);
      const auto reports =
          noise_sweep(ablation_mode_from_string(*sw_mode), *sw_starts,
                      *sw_window, hc, seeds);
      if (!sw_jsonl->empty()) write_reports_jsonl(*sw_jsonl, reports);
      if (!sw_csv->empty()) write_summary_csv(*sw_csv, reports);
      print_aggregates(reports);
    });
  });

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  // CLI11 consumes arguments in reverse order
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return kUsage;
  }
  return exit_code;
}
