// Command-line front end: train, evaluate, predict, quantify, gradcheck.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "sccnn/checkpoint.hpp"
#include "sccnn/cnn.hpp"
#include "sccnn/corpus.hpp"
#include "sccnn/embed.hpp"
#include "sccnn/errors.hpp"
#include "sccnn/gradcheck.hpp"
#include "sccnn/metrics.hpp"
#include "sccnn/ordinal.hpp"
#include "sccnn/quant.hpp"
#include "sccnn/text_prep.hpp"
#include "sccnn/train.hpp"

namespace {

using namespace sccnn;

struct RunConfig {
  std::string command;
  std::string train_path, dev_path, test_path, embeddings_path, checkpoint_path,
      out_path;
  int scale_classes = 0;  // 0 = unset
  bool has_topic = false;
  bool ordinal = false;
  std::string filters_spec;
  std::string select_spec;
  TrainConfig train;
};

std::vector<int> parse_filters(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      int h = std::stoi(item, &pos);
      if (pos != item.size() || h < 1) throw std::invalid_argument(item);
      out.push_back(h);
    } catch (const std::exception&) {
      throw DataError("bad filter window '" + item + "' in --filters");
    }
  }
  if (out.empty()) throw DataError("--filters needs at least one window size");
  return out;
}

std::optional<SelectionMetric> parse_select(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  if (spec == "f1pn") return SelectionMetric::F1PN;
  if (spec == "acc") return SelectionMetric::Accuracy;
  if (spec == "avgrec") return SelectionMetric::AvgRec;
  if (spec == "mae") return SelectionMetric::MaeMacro;
  throw DataError("unknown selection metric '" + spec + "'");
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw DataError(msg);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open output file: " + path);
  return out;
}

// Extends the checkpoint vocabulary with rows for tokens unseen at training
// time, seeded like training-time OOV initialization.
struct LoadedModel {
  CnnParams params;
  EmbeddingTable table;
  Scale scale;
};

LoadedModel load_model(const RunConfig& cfg) {
  Checkpoint ckpt = load_checkpoint(cfg.checkpoint_path);
  LoadedModel m{std::move(ckpt.params), {}, Scale::from_class_count(0)};
  m.scale = Scale::from_class_count(m.params.num_classes);
  if (cfg.scale_classes != 0 && cfg.scale_classes != m.params.num_classes)
    throw DataError("--scale " + std::to_string(cfg.scale_classes) +
                    " does not match checkpoint scale of " +
                    std::to_string(m.params.num_classes) + " classes");
  ckpt.params = m.params;  // table_from_checkpoint reads params.k
  m.table = table_from_checkpoint(ckpt);
  return m;
}

void attach_test_vocab(LoadedModel& m, const Dataset& test, std::uint64_t seed) {
  attach_vocab(m.table, dataset_tokens(test), seed);
}

int predict_tweet(const LoadedModel& m, const Tweet& t, int n) {
  EncodedExample ex = encode(tokenize(normalize(t.text)), m.table, n);
  return predict_class(m.params, m.table.vectors, ex);
}

int run_train(const RunConfig& cfg) {
  require(!cfg.train_path.empty(), "train requires --train");
  require(!cfg.dev_path.empty(), "train requires --dev");
  require(!cfg.embeddings_path.empty(), "train requires --embeddings");
  require(!cfg.checkpoint_path.empty(), "train requires --checkpoint");
  require(cfg.scale_classes != 0, "train requires --scale");

  Scale scale = Scale::from_class_count(cfg.scale_classes);
  Dataset train_ds = parse_dataset_file(cfg.train_path, scale, cfg.has_topic);
  Dataset dev_ds = parse_dataset_file(cfg.dev_path, scale, cfg.has_topic);

  int dim = detect_embedding_dim_file(cfg.embeddings_path);
  LoadedEmbeddings loaded = load_embeddings_file(cfg.embeddings_path, dim);
  if (loaded.duplicates > 0)
    std::cerr << "warning: " << loaded.duplicates
              << " duplicate embedding tokens (last wins)\n";
  EmbeddingTable table = std::move(loaded.table);

  TrainConfig tc = cfg.train;
  tc.embedding_dim = dim;
  auto corpus_tokens = dataset_tokens(train_ds);
  auto dev_tokens = dataset_tokens(dev_ds);
  corpus_tokens.insert(corpus_tokens.end(), dev_tokens.begin(), dev_tokens.end());
  std::size_t added = attach_vocab(table, corpus_tokens, tc.seed);
  std::cerr << "vocab: " << table.rows() << " rows (" << added
            << " initialized randomly)\n";

  std::ostringstream log;
  FitResult result = fit(tc, train_ds, dev_ds, table, &log);
  std::cout << log.str();
  std::cout << "best epoch " << result.best_epoch << " dev_" << result.metric.name
            << "=" << result.best_score << (result.stopped_early ? " (early stop)" : "")
            << "\n";
  if (!cfg.out_path.empty()) open_out(cfg.out_path) << log.str();

  save_checkpoint(cfg.checkpoint_path, table.tokens, result.best_params,
                  result.best_embeddings);
  return 0;
}

MetricReport build_report(const std::vector<int>& preds, const std::vector<int>& golds,
                          const Scale& scale) {
  MetricReport report;
  ConfusionMatrix cm = confusion(preds, golds, scale);
  ClassificationScores cls = classification_scores(cm);
  if (cls.f1_pn) report.emplace_back("F1_PN", *cls.f1_pn);
  report.emplace_back("AvgRec", cls.avg_rec);
  report.emplace_back("Acc", cls.acc);
  report.emplace_back("F1_macro", cls.macro_f1);
  if (scale.kind != ScaleKind::Five)
    for (int c = 0; c < scale.num_classes(); ++c)
      report.emplace_back("F1_" + scale.label_name(c), f1_class(cm, c).f1);
  if (scale.kind != ScaleKind::Two) {
    MaeScores mae = mae_scores(preds, golds, scale);
    report.emplace_back("MAE_M", mae.macro);
    report.emplace_back("MAE_mu", mae.micro);
    for (const auto& [c, err] : mae.per_class)
      report.emplace_back("MAE_M_" + scale.label_name(c), err);
  }
  return report;
}

int run_evaluate(const RunConfig& cfg) {
  require(!cfg.test_path.empty(), "evaluate requires --test");
  require(!cfg.checkpoint_path.empty(), "evaluate requires --checkpoint");
  LoadedModel m = load_model(cfg);
  Dataset test = parse_dataset_file(cfg.test_path, m.scale, cfg.has_topic);
  attach_test_vocab(m, test, cfg.train.seed);

  std::vector<int> preds, golds;
  for (const Tweet& t : test.tweets) {
    if (!t.label) throw DataError("evaluate needs gold labels; tweet '" + t.id +
                                  "' is unlabeled");
    preds.push_back(predict_tweet(m, t, m.params.n));
    golds.push_back(*t.label);
  }
  MetricReport report = build_report(preds, golds, m.scale);
  print_report_table(report, std::cerr);
  print_report_machine(report, std::cout);
  if (!cfg.out_path.empty()) {
    auto out = open_out(cfg.out_path);
    print_report_machine(report, out);
  }
  return 0;
}

int run_predict(const RunConfig& cfg) {
  require(!cfg.test_path.empty(), "predict requires --test");
  require(!cfg.checkpoint_path.empty(), "predict requires --checkpoint");
  LoadedModel m = load_model(cfg);
  Dataset test = parse_dataset_file(cfg.test_path, m.scale, cfg.has_topic);
  attach_test_vocab(m, test, cfg.train.seed);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file = open_out(cfg.out_path);
    out = &file;
  }
  for (const Tweet& t : test.tweets) {
    int pred = predict_tweet(m, t, m.params.n);
    *out << t.id << '\t' << m.scale.label_name(pred) << '\n';
  }
  return 0;
}

int run_quantify(const RunConfig& cfg) {
  require(!cfg.test_path.empty(), "quantify requires --test");
  require(!cfg.checkpoint_path.empty(), "quantify requires --checkpoint");
  require(cfg.has_topic, "quantify requires --topic (topic-bearing test data)");
  require(!cfg.out_path.empty(), "quantify requires --out for the distribution file");
  LoadedModel m = load_model(cfg);
  Dataset test = parse_dataset_file(cfg.test_path, m.scale, cfg.has_topic);
  attach_test_vocab(m, test, cfg.train.seed);

  std::vector<TopicGroup> groups = group_by_topic(test);
  auto pred = classify_and_count(groups, m.scale, [&](const Tweet& t) {
    return predict_tweet(m, t, m.params.n);
  });

  auto out = open_out(cfg.out_path);
  for (const auto& [topic, dist] : pred) {
    out << topic;
    for (double p : dist.p) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", p);
      out << '\t' << buf;
    }
    out << '\n';
  }

  std::map<std::string, SentimentDistribution> gold;
  std::map<std::string, long long> sizes;
  for (const TopicGroup& g : groups) {
    gold.emplace(g.topic, gold_distribution(g, m.scale));
    sizes.emplace(g.topic, static_cast<long long>(g.tweets.size()));
  }
  MetricReport report;
  for (QuantMetric metric :
       {QuantMetric::Kld, QuantMetric::Ae, QuantMetric::Rae, QuantMetric::Emd})
    report.emplace_back(quant_metric_name(metric),
                        evaluate_quant(gold, pred, metric, sizes));
  print_report_table(report, std::cerr);
  print_report_machine(report, std::cout);
  return 0;
}

int run_gradcheck(const RunConfig& cfg) {
  // Tiny random model: vocab 20, k=8, n=12, windows {2,3} x 4 maps, C=3.
  std::mt19937_64 rng(cfg.train.seed);
  const int vocab = 21, k = 8, n = 12, classes = 3;
  CnnParams params = init_params(k, n, classes, {2, 3}, {4, 4}, cfg.ordinal, rng);
  std::uniform_real_distribution<double> unit(-0.25, 0.25);
  Eigen::MatrixXd emb(vocab, k);
  for (int r = 0; r < vocab; ++r)
    for (int c = 0; c < k; ++c) emb(r, c) = r == 0 ? 0.0 : unit(rng);

  EncodedExample ex;
  ex.indices.assign(n, 0);
  std::uniform_int_distribution<int> tok(1, vocab - 1);
  ex.true_len = 9;
  for (int i = 0; i < ex.true_len; ++i) ex.indices[i] = tok(rng);
  std::uniform_int_distribution<int> lab(0, classes - 1);
  int label = lab(rng);

  Eigen::VectorXd mask(params.total_filters());
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < mask.size(); ++i) mask[i] = u01(rng) < 0.7 ? 1.0 : 0.0;

  GradCheckReport infer = gradient_check(params, emb, ex, label, 0.01);
  GradCheckReport train =
      gradient_check(params, emb, ex, label, 0.01, &mask, 0.7);

  auto print = [](const char* mode, const GradCheckReport& r) {
    for (const auto& g : r.groups)
      std::printf("%s %-14s max_rel_err=%.3e\n", mode, g.name.c_str(), g.max_rel_err);
  };
  print("infer", infer);
  print("train", train);
  double worst = std::max(infer.max_rel_err, train.max_rel_err);
  std::printf("max_rel_err=%.3e\n", worst);
  if (worst >= 1e-4)
    throw NumericError("gradient check failed: max relative error " +
                       std::to_string(worst));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Convolutional tweet sentiment classification and quantification"};
  app.set_config("--config")->configurable(false);
  app.allow_config_extras(false);

  app.add_option("command", cfg.command, "train|evaluate|predict|quantify|gradcheck")
      ->required()
      ->check(CLI::IsMember({"train", "evaluate", "predict", "quantify", "gradcheck"}));
  app.add_option("--train", cfg.train_path, "training dataset (TSV)");
  app.add_option("--dev", cfg.dev_path, "validation dataset (TSV)");
  app.add_option("--test", cfg.test_path, "test dataset (TSV)");
  app.add_option("--embeddings", cfg.embeddings_path, "pretrained vectors (text)");
  app.add_option("--checkpoint", cfg.checkpoint_path, "model checkpoint path");
  app.add_option("--out", cfg.out_path, "output file");
  app.add_option("--scale", cfg.scale_classes, "label scale: 2, 3, or 5")
      ->check(CLI::IsMember({2, 3, 5}));
  app.add_flag("--topic", cfg.has_topic, "datasets carry a topic column");
  app.add_flag("--ordinal", cfg.ordinal, "use the ordinal output head");
  app.add_option("--seed", cfg.train.seed, "root RNG seed");
  app.add_option("--epochs", cfg.train.max_epochs, "maximum training epochs");
  app.add_option("--batch-size", cfg.train.batch_size, "mini-batch size");
  app.add_option("--dropout", cfg.train.dropout, "dropout rate on the pooled vector");
  app.add_option("--l2", cfg.train.l2, "l2 penalty weight");
  app.add_option("--filters", cfg.filters_spec, "filter window sizes, e.g. 3,4,5");
  app.add_option("--maps", cfg.train.maps_per_window, "feature maps per window size");
  app.add_option("--max-len", cfg.train.max_len, "padded input length");
  app.add_option("--patience", cfg.train.patience,
                 "early-stopping patience in epochs (0 disables)");
  app.add_option("--select", cfg.select_spec, "selection metric: f1pn|acc|avgrec|mae");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    cfg.train.ordinal = cfg.ordinal;
    if (!cfg.filters_spec.empty())
      cfg.train.window_sizes = parse_filters(cfg.filters_spec);
    cfg.train.selection_override = parse_select(cfg.select_spec);

    if (cfg.command == "train") return run_train(cfg);
    if (cfg.command == "evaluate") return run_evaluate(cfg);
    if (cfg.command == "predict") return run_predict(cfg);
    if (cfg.command == "quantify") return run_quantify(cfg);
    if (cfg.command == "gradcheck") return run_gradcheck(cfg);
    std::cerr << "usage error: unknown command '" << cfg.command << "'\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
