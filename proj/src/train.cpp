#include "sccnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "sccnn/errors.hpp"
#include "sccnn/metrics.hpp"
#include "sccnn/text_prep.hpp"

namespace sccnn {

namespace {

const char* metric_name(SelectionMetric m) {
  switch (m) {
    case SelectionMetric::F1PN: return "F1_PN";
    case SelectionMetric::Accuracy: return "Acc";
    case SelectionMetric::AvgRec: return "AvgRec";
    case SelectionMetric::MaeMacro: return "MAE_M";
  }
  return "?";
}

// Elementwise Adadelta over one tensor; shapes of the accumulators mirror the
// parameter exactly.
template <typename Tensor>
void adadelta_tensor(Tensor& param, const Tensor& grad, Tensor& eg2, Tensor& edx2,
                     double rho, double eps, const char* group) {
  if (!grad.allFinite())
    throw NumericError(std::string("non-finite gradient in parameter group '") +
                       group + "'");
  eg2 = rho * eg2.array() + (1 - rho) * grad.array().square();
  Tensor delta =
      (-((edx2.array() + eps).sqrt() / (eg2.array() + eps).sqrt()) * grad.array())
          .matrix();
  edx2 = rho * edx2.array() + (1 - rho) * delta.array().square();
  param += delta;
}

// Deterministic Fisher-Yates driven by the training RNG.
void shuffle_indices(std::vector<int>& order, std::mt19937_64& rng) {
  for (size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
}

}  // namespace

MetricSpec select_metric(const Scale& scale,
                         std::optional<SelectionMetric> override_metric) {
  SelectionMetric m;
  if (override_metric) {
    m = *override_metric;
    if (m == SelectionMetric::F1PN && scale.kind == ScaleKind::Five)
      throw DataError("F1_PN selection is undefined on the five-point scale");
    if (m == SelectionMetric::MaeMacro && scale.kind == ScaleKind::Two)
      throw DataError("MAE selection requires a Three or Five scale");
  } else {
    m = scale.kind == ScaleKind::Five ? SelectionMetric::MaeMacro
                                      : SelectionMetric::F1PN;
  }
  bool higher = m != SelectionMetric::MaeMacro;
  return MetricSpec{m, higher, metric_name(m)};
}

double adadelta_scalar_step(double& eg2, double& edx2, double g, double rho,
                            double eps) {
  eg2 = rho * eg2 + (1 - rho) * g * g;
  double delta = -(std::sqrt(edx2 + eps) / std::sqrt(eg2 + eps)) * g;
  edx2 = rho * edx2 + (1 - rho) * delta * delta;
  return delta;
}

AdadeltaState AdadeltaState::zeros_like(const CnnParams& params, int vocab_rows) {
  AdadeltaState s;
  for (size_t g = 0; g < params.filter_w.size(); ++g) {
    s.filter_w_g2.push_back(Eigen::MatrixXd::Zero(params.filter_w[g].rows(),
                                                  params.filter_w[g].cols()));
    s.filter_w_dx2.push_back(Eigen::MatrixXd::Zero(params.filter_w[g].rows(),
                                                   params.filter_w[g].cols()));
    s.filter_b_g2.push_back(Eigen::VectorXd::Zero(params.filter_b[g].size()));
    s.filter_b_dx2.push_back(Eigen::VectorXd::Zero(params.filter_b[g].size()));
  }
  s.out_w_g2 = Eigen::MatrixXd::Zero(params.out_w.rows(), params.out_w.cols());
  s.out_w_dx2 = Eigen::MatrixXd::Zero(params.out_w.rows(), params.out_w.cols());
  s.out_b_g2 = Eigen::VectorXd::Zero(params.out_b.size());
  s.out_b_dx2 = Eigen::VectorXd::Zero(params.out_b.size());
  s.emb_g2 = Eigen::MatrixXd::Zero(vocab_rows, params.k);
  s.emb_dx2 = Eigen::MatrixXd::Zero(vocab_rows, params.k);
  return s;
}

void adadelta_step(AdadeltaState& state, const Gradients& grads, CnnParams& params,
                   Eigen::MatrixXd& embeddings, double rho, double eps,
                   bool freeze_embeddings) {
  for (size_t g = 0; g < params.filter_w.size(); ++g) {
    adadelta_tensor(params.filter_w[g], grads.filter_w[g], state.filter_w_g2[g],
                    state.filter_w_dx2[g], rho, eps, "filter_w");
    adadelta_tensor(params.filter_b[g], grads.filter_b[g], state.filter_b_g2[g],
                    state.filter_b_dx2[g], rho, eps, "filter_b");
  }
  adadelta_tensor(params.out_w, grads.out_w, state.out_w_g2, state.out_w_dx2, rho,
                  eps, "out_w");
  adadelta_tensor(params.out_b, grads.out_b, state.out_b_g2, state.out_b_dx2, rho,
                  eps, "out_b");
  if (!freeze_embeddings)
    adadelta_tensor(embeddings, grads.embeddings, state.emb_g2, state.emb_dx2, rho,
                    eps, "embeddings");
}

std::vector<std::vector<std::string>> dataset_tokens(const Dataset& d) {
  std::vector<std::vector<std::string>> out;
  out.reserve(d.tweets.size());
  for (const Tweet& t : d.tweets) out.push_back(tokenize(normalize(t.text)));
  return out;
}

std::vector<EncodedExample> encode_dataset(const Dataset& d,
                                           const EmbeddingTable& table, int n) {
  std::vector<EncodedExample> out;
  out.reserve(d.tweets.size());
  for (const Tweet& t : d.tweets) {
    EncodedExample ex = encode(tokenize(normalize(t.text)), table, n);
    ex.label = t.label;
    out.push_back(std::move(ex));
  }
  return out;
}

double evaluate_metric(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                       const std::vector<EncodedExample>& examples,
                       const Scale& scale, const MetricSpec& metric) {
  if (examples.empty()) throw DataError("evaluate_metric: no examples");
  std::vector<int> preds, golds;
  preds.reserve(examples.size());
  golds.reserve(examples.size());
  for (const auto& ex : examples) {
    if (!ex.label) throw DataError("evaluate_metric: unlabeled example");
    preds.push_back(predict_class(params, embeddings, ex));
    golds.push_back(*ex.label);
  }
  switch (metric.metric) {
    case SelectionMetric::MaeMacro:
      return mae_scores(preds, golds, scale).macro;
    case SelectionMetric::F1PN: {
      auto s = classification_scores(confusion(preds, golds, scale));
      if (!s.f1_pn) throw DataError("F1_PN is undefined for this scale");
      return *s.f1_pn;
    }
    case SelectionMetric::Accuracy:
      return classification_scores(confusion(preds, golds, scale)).acc;
    case SelectionMetric::AvgRec:
      return classification_scores(confusion(preds, golds, scale)).avg_rec;
  }
  throw DataError("unknown selection metric");
}

FitResult fit(const TrainConfig& config, const Dataset& train, const Dataset& dev,
              const EmbeddingTable& table, std::ostream* log) {
  if (train.tweets.empty()) throw DataError("fit: empty training set");
  if (dev.tweets.empty()) throw DataError("fit: empty dev set");
  if (!(train.scale == dev.scale)) throw DataError("fit: train/dev scale mismatch");
  if (table.dim != config.embedding_dim)
    throw DataError("fit: embedding table dimension " + std::to_string(table.dim) +
                    " does not match configured k=" +
                    std::to_string(config.embedding_dim));
  if (config.batch_size <= 0 || config.max_epochs <= 0)
    throw DataError("fit: batch size and epoch count must be positive");
  if (!(config.dropout >= 0 && config.dropout < 1))
    throw DataError("fit: dropout rate must be in [0, 1)");

  MetricSpec metric = select_metric(train.scale, config.selection_override);
  const int n = config.max_len;
  const int num_classes = train.scale.num_classes();
  const double keep_prob = 1.0 - config.dropout;

  std::vector<EncodedExample> train_ex = encode_dataset(train, table, n);
  std::vector<EncodedExample> dev_ex = encode_dataset(dev, table, n);
  for (const auto& ex : train_ex)
    if (!ex.label) throw DataError("fit: unlabeled training tweet");

  std::mt19937_64 rng(config.seed);
  std::vector<int> maps(config.window_sizes.size(), config.maps_per_window);
  CnnParams params = init_params(config.embedding_dim, n, num_classes,
                                 config.window_sizes, maps, config.ordinal, rng);
  Eigen::MatrixXd embeddings = table.vectors;
  AdadeltaState state =
      AdadeltaState::zeros_like(params, static_cast<int>(embeddings.rows()));

  const int f_total = params.total_filters();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  FitResult result;
  result.metric = metric;
  std::vector<int> order(train_ex.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  int epochs_since_best = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_indices(order, rng);
    double loss_sum = 0;

    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      size_t stop = std::min(order.size(), start + config.batch_size);
      Gradients batch_grad =
          Gradients::zeros_like(params, static_cast<int>(embeddings.rows()));
      for (size_t i = start; i < stop; ++i) {
        const EncodedExample& ex = train_ex[order[i]];
        Eigen::VectorXd mask(f_total);
        for (int j = 0; j < f_total; ++j)
          mask[j] = unit(rng) < keep_prob ? 1.0 : 0.0;
        ForwardTrace trace = forward(params, embeddings, ex, mask, keep_prob);
        double l = loss(trace, *ex.label, params, config.l2);
        if (!std::isfinite(l))
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
        loss_sum += l;
        batch_grad.accumulate(
            backward(trace, ex, *ex.label, params, embeddings, config.l2));
      }
      batch_grad.scale(1.0 / static_cast<double>(stop - start));
      adadelta_step(state, batch_grad, params, embeddings, config.rho, config.eps,
                    config.freeze_embeddings);
    }

    double dev_score =
        evaluate_metric(params, embeddings, dev_ex, dev.scale, metric);
    bool improved =
        result.history.empty() ||
        (metric.higher_is_better ? dev_score > result.best_score
                                 : dev_score < result.best_score);
    if (improved) {
      result.best_score = dev_score;
      result.best_epoch = epoch;
      result.best_params = params;
      result.best_embeddings = embeddings;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
    }
    double train_loss = loss_sum / static_cast<double>(train_ex.size());
    result.history.push_back({epoch, train_loss, dev_score, improved});
    if (log) {
      char line[160];
      std::snprintf(line, sizeof(line), "epoch=%d train_loss=%.6f dev_%s=%.6f best=%s",
                    epoch, train_loss, metric.name, dev_score,
                    improved ? "true" : "false");
      *log << line << '\n';
    }
    if (config.patience > 0 && epochs_since_best >= config.patience) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

}  // namespace sccnn
