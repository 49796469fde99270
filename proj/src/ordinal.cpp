#include "sccnn/ordinal.hpp"

#include <cmath>

#include "sccnn/errors.hpp"

namespace sccnn {

std::vector<int> encode_ordinal(int label, int num_classes) {
  if (label < 0 || label >= num_classes)
    throw DataError("ordinal label " + std::to_string(label) +
                    " out of range for " + std::to_string(num_classes) + " classes");
  std::vector<int> bits(num_classes - 1);
  for (int t = 0; t < num_classes - 1; ++t) bits[t] = label > t ? 1 : 0;
  return bits;
}

int decode_ordinal(const std::vector<double>& outputs) {
  int count = 0;
  for (double o : outputs)
    if (o > 0.5) ++count;
  return count;
}

int decode_ordinal(const Eigen::VectorXd& outputs) {
  int count = 0;
  for (Eigen::Index i = 0; i < outputs.size(); ++i)
    if (outputs[i] > 0.5) ++count;
  return count;
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double ordinal_loss(const Eigen::VectorXd& logits, const std::vector<int>& bits) {
  if (static_cast<size_t>(logits.size()) != bits.size())
    throw DataError("ordinal_loss: logit/target length mismatch");
  constexpr double kClamp = 1e-12;
  double total = 0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    double s = stable_sigmoid(logits[i]);
    double p = bits[i] ? s : 1.0 - s;
    total += -std::log(std::max(p, kClamp));
  }
  return total;
}

Eigen::VectorXd ordinal_loss_grad(const Eigen::VectorXd& logits,
                                  const std::vector<int>& bits) {
  if (static_cast<size_t>(logits.size()) != bits.size())
    throw DataError("ordinal_loss_grad: logit/target length mismatch");
  Eigen::VectorXd g(logits.size());
  for (Eigen::Index i = 0; i < logits.size(); ++i)
    g[i] = stable_sigmoid(logits[i]) - bits[i];
  return g;
}

}  // namespace sccnn
