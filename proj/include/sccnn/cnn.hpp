#pragma once

#include <Eigen/Core>
#include <random>
#include <utility>
#include <vector>

#include "sccnn/embed.hpp"

namespace sccnn {

// Convolutional filters plus the output head. Embeddings live in the
// EmbeddingTable and are passed alongside; their gradients are reported next
// to the parameter gradients.
struct CnnParams {
  int k = 0;            // embedding dimension
  int n = 0;            // padded input length
  int num_classes = 0;  // C of the task scale
  std::vector<int> window_sizes;
  std::vector<int> maps_per_window;  // parallel to window_sizes
  bool ordinal_head = false;         // C-1 sigmoid units instead of C softmax units

  std::vector<Eigen::MatrixXd> filter_w;  // per window group: maps x (h*k)
  std::vector<Eigen::VectorXd> filter_b;  // per window group: maps
  Eigen::MatrixXd out_w;                  // out_dim x total_filters
  Eigen::VectorXd out_b;                  // out_dim

  int total_filters() const;
  int out_dim() const { return ordinal_head ? num_classes - 1 : num_classes; }
};

// Filters and output weights uniform on [-0.05, 0.05], biases zero. Draw
// order is fixed: filter groups in declared order, row by row, then out_w.
CnnParams init_params(int k, int n, int num_classes,
                      const std::vector<int>& window_sizes,
                      const std::vector<int>& maps_per_window, bool ordinal_head,
                      std::mt19937_64& rng);

// ReLU(w . window + b) for one window of concatenated embeddings.
double conv_feature(const Eigen::VectorXd& w, double b,
                    const Eigen::VectorXd& window);

// Applies one filter over every window position, pad positions included.
// Result length is n - h + 1; requires n >= h.
Eigen::VectorXd feature_map(const Eigen::VectorXd& w, double b, int h,
                            const Eigen::MatrixXd& embeddings,
                            const std::vector<int>& indices);

// Max value and the lowest index attaining it.
std::pair<double, int> max_pool(const Eigen::VectorXd& map);

struct ForwardTrace {
  std::vector<Eigen::MatrixXd> maps;  // per group: (n-h+1) x maps
  Eigen::VectorXd pooled;             // total_filters
  std::vector<int> argmax;            // pooling position per filter
  Eigen::VectorXd dropout_mask;       // empty in infer mode
  double keep_prob = 1.0;
  Eigen::VectorXd dropped;  // pooled after mask / keep_prob (== pooled in infer)
  Eigen::VectorXd logits;
  Eigen::VectorXd probs;  // softmax distribution, or per-unit sigmoids in ordinal mode
};

// Inference-mode forward pass: no mask, no scaling.
ForwardTrace forward(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                     const EncodedExample& example);

// Training-mode forward pass with inverted dropout on the pooled vector.
// mask holds 0/1 per filter and must have length total_filters.
ForwardTrace forward(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                     const EncodedExample& example, const Eigen::VectorXd& mask,
                     double keep_prob);

// Cross-entropy of the softmax head (probability clamped at 1e-12), or the
// summed binary cross-entropy of the ordinal head, plus
// (l2/2) * (sum ||filter w||^2 + ||out_w||^2). Biases and embeddings are not
// penalized.
double loss(const ForwardTrace& trace, int label, const CnnParams& params,
            double l2);

struct Gradients {
  std::vector<Eigen::MatrixXd> filter_w;
  std::vector<Eigen::VectorXd> filter_b;
  Eigen::MatrixXd out_w;
  Eigen::VectorXd out_b;
  Eigen::MatrixXd embeddings;  // vocab rows x k; pad row always zero

  static Gradients zeros_like(const CnnParams& params, int vocab_rows);
  void accumulate(const Gradients& other);
  void scale(double factor);
};

// Exact gradients of loss() w.r.t. every parameter and the embedding rows of
// the example. Gradient flows only through each filter's argmax window and
// only where the ReLU pre-activation is positive; the pad row is frozen at
// zero. The trace must come from forward() on the same example and params.
Gradients backward(const ForwardTrace& trace, const EncodedExample& example,
                   int label, const CnnParams& params,
                   const Eigen::MatrixXd& embeddings, double l2);

// Argmax of the softmax distribution (ties toward the lower class), or the
// threshold-count decoding of the ordinal head.
int predict_class(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                  const EncodedExample& example);

}  // namespace sccnn
