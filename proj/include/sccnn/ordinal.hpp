#pragma once

#include <Eigen/Core>
#include <vector>

namespace sccnn {

// Cumulative binary decomposition of an ordinal label: bits[t] = 1 iff
// label > t, for t in 0..C-2. Targets are monotone non-increasing.
std::vector<int> encode_ordinal(int label, int num_classes);

// Count-based decoding: the number of outputs strictly greater than 0.5.
// Total and robust to non-monotone outputs.
int decode_ordinal(const std::vector<double>& outputs);
int decode_ordinal(const Eigen::VectorXd& outputs);

// Sum of per-unit binary cross-entropies between sigmoid(logit) and the
// target bit. Sigmoid is clamped to [1e-12, 1-1e-12] inside the log.
double ordinal_loss(const Eigen::VectorXd& logits, const std::vector<int>& bits);

// d ordinal_loss / d logits = sigmoid(logits) - bits.
Eigen::VectorXd ordinal_loss_grad(const Eigen::VectorXd& logits,
                                  const std::vector<int>& bits);

double stable_sigmoid(double x);

}  // namespace sccnn
