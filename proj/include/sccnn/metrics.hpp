#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sccnn/corpus.hpp"

namespace sccnn {

struct ConfusionMatrix {
  Scale scale;
  std::vector<long> counts;  // row-major C x C; rows = gold, columns = predicted
  long total = 0;

  long at(int gold, int pred) const;
  long& at(int gold, int pred);
};

ConfusionMatrix confusion(const std::vector<int>& preds,
                          const std::vector<int>& golds, const Scale& scale);

struct ClassPRF {
  double precision = 0, recall = 0, f1 = 0;
};

// Precision/recall/F1 for one class; every 0/0 is defined as 0.
ClassPRF f1_class(const ConfusionMatrix& cm, int c);

struct ClassificationScores {
  std::optional<double> f1_pn;  // mean F1 of positive and negative; Two/Three only
  double avg_rec = 0;           // macro recall over all scale classes
  double acc = 0;
  double macro_f1 = 0;
};

ClassificationScores classification_scores(const ConfusionMatrix& cm);

struct MaeScores {
  double macro = 0;  // mean over gold classes present of the per-class mean error
  double micro = 0;  // mean per-example absolute error
  std::vector<std::pair<int, double>> per_class;  // (class index, mean error), scale order
};

// Absolute error on the scale's integer coding. Three and Five scales only.
MaeScores mae_scores(const std::vector<int>& preds, const std::vector<int>& golds,
                     const Scale& scale);

struct SentimentDistribution {
  Scale scale;
  std::vector<double> p;  // length C, entries >= 0 summing to 1
};

SentimentDistribution make_distribution(const Scale& scale, std::vector<double> p);

// KL divergence between prevalence distributions, both smoothed as
// p_s(c) = (p(c) + eps) / (1 + C*eps) with eps = 1/(2N). Natural log.
double kld(const SentimentDistribution& true_p, const SentimentDistribution& pred_p,
           long long test_size);

struct AbsErrors {
  double ae = 0;   // (1/C) sum |q - p|
  double rae = 0;  // (1/C) sum |q_s - p_s| / p_s with the same smoothing as kld
};

AbsErrors abs_errors(const SentimentDistribution& true_p,
                     const SentimentDistribution& pred_p, long long test_size);

// Earth mover's distance with unit distance between adjacent classes:
// the L1 distance between the two cumulative distributions.
double emd(const SentimentDistribution& true_p, const SentimentDistribution& pred_p);

// Report rendering: an aligned human-readable table and the machine format of
// one `name=value` line per metric with 6 decimals.
using MetricReport = std::vector<std::pair<std::string, double>>;
void print_report_table(const MetricReport& report, std::ostream& out);
void print_report_machine(const MetricReport& report, std::ostream& out);

}  // namespace sccnn
