#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sccnn/cnn.hpp"
#include "sccnn/corpus.hpp"
#include "sccnn/embed.hpp"

namespace sccnn {

enum class SelectionMetric { F1PN, Accuracy, AvgRec, MaeMacro };

struct MetricSpec {
  SelectionMetric metric;
  bool higher_is_better;
  const char* name;  // as printed in the training log and metric reports
};

// Default model-selection metric: F1_PN (maximized) for Two and Three scales,
// MAE_M (minimized) for Five. An override must be compatible with the scale.
MetricSpec select_metric(const Scale& scale,
                         std::optional<SelectionMetric> override_metric);

struct TrainConfig {
  int batch_size = 10;
  int max_epochs = 15;
  double dropout = 0.3;
  double l2 = 0.01;
  std::vector<int> window_sizes{3, 4, 5};
  int maps_per_window = 100;
  int max_len = 50;       // padded input length n
  int embedding_dim = 200;
  double rho = 0.95;
  double eps = 1e-6;
  int patience = 5;  // epochs without improvement before stopping; 0 disables
  std::optional<SelectionMetric> selection_override;
  std::uint64_t seed = 42;
  bool ordinal = false;
  bool freeze_embeddings = false;
};

// One Adadelta update for a single scalar. Returns the applied delta.
//   eg2  <- rho*eg2 + (1-rho)*g^2
//   d     = -(sqrt(edx2+eps)/sqrt(eg2+eps)) * g
//   edx2 <- rho*edx2 + (1-rho)*d^2
double adadelta_scalar_step(double& eg2, double& edx2, double g, double rho,
                            double eps);

// Squared-gradient and squared-update EMAs, one pair per parameter tensor.
struct AdadeltaState {
  std::vector<Eigen::MatrixXd> filter_w_g2, filter_w_dx2;
  std::vector<Eigen::VectorXd> filter_b_g2, filter_b_dx2;
  Eigen::MatrixXd out_w_g2, out_w_dx2;
  Eigen::VectorXd out_b_g2, out_b_dx2;
  Eigen::MatrixXd emb_g2, emb_dx2;

  static AdadeltaState zeros_like(const CnnParams& params, int vocab_rows);
};

// Applies one Adadelta step to every parameter group (and the embedding rows
// unless frozen). Throws NumericError naming the group on a non-finite
// gradient.
void adadelta_step(AdadeltaState& state, const Gradients& grads, CnnParams& params,
                   Eigen::MatrixXd& embeddings, double rho, double eps,
                   bool freeze_embeddings);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double dev_score = 0;
  bool is_best = false;
};

struct FitResult {
  CnnParams best_params;
  Eigen::MatrixXd best_embeddings;
  int best_epoch = 0;
  double best_score = 0;
  std::vector<EpochRecord> history;
  bool stopped_early = false;
  MetricSpec metric{SelectionMetric::F1PN, true, "F1_PN"};
};

std::vector<std::vector<std::string>> dataset_tokens(const Dataset& d);
std::vector<EncodedExample> encode_dataset(const Dataset& d,
                                           const EmbeddingTable& table, int n);

// Mini-batch Adadelta training with per-epoch dev evaluation, best-checkpoint
// retention, and early stopping. Shuffles, dropout masks, and parameter
// initialization all derive from config.seed; identical inputs give
// bit-identical results. When log is non-null, one line per epoch is written:
//   epoch=<e> train_loss=<x> dev_<metric>=<y> best=<bool>
FitResult fit(const TrainConfig& config, const Dataset& train, const Dataset& dev,
              const EmbeddingTable& table, std::ostream* log = nullptr);

// Selection-metric value of a parameter set on an encoded, labeled dataset.
double evaluate_metric(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                       const std::vector<EncodedExample>& examples,
                       const Scale& scale, const MetricSpec& metric);

}  // namespace sccnn
