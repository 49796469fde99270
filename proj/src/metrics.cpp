#include "sccnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "sccnn/errors.hpp"

namespace sccnn {

namespace {

void check_indices(const std::vector<int>& v, int c, const char* what) {
  for (int x : v)
    if (x < 0 || x >= c)
      throw DataError(std::string(what) + " class index " + std::to_string(x) +
                      " out of range for a " + std::to_string(c) + "-class scale");
}

void check_distribution(const SentimentDistribution& d, const char* what) {
  if (static_cast<int>(d.p.size()) != d.scale.num_classes())
    throw DataError(std::string(what) + " distribution has wrong length");
  double sum = 0;
  for (double x : d.p) {
    if (!(x >= 0)) throw DataError(std::string(what) + " distribution has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw DataError(std::string(what) + " distribution sums to " + std::to_string(sum));
}

std::vector<double> smooth(const std::vector<double>& p, double eps) {
  std::vector<double> s(p.size());
  double denom = 1.0 + eps * static_cast<double>(p.size());
  for (size_t i = 0; i < p.size(); ++i) s[i] = (p[i] + eps) / denom;
  return s;
}

}  // namespace

long ConfusionMatrix::at(int gold, int pred) const {
  return counts[gold * scale.num_classes() + pred];
}

long& ConfusionMatrix::at(int gold, int pred) {
  return counts[gold * scale.num_classes() + pred];
}

ConfusionMatrix confusion(const std::vector<int>& preds,
                          const std::vector<int>& golds, const Scale& scale) {
  if (preds.size() != golds.size())
    throw DataError("confusion: " + std::to_string(preds.size()) +
                    " predictions vs " + std::to_string(golds.size()) + " golds");
  int c = scale.num_classes();
  check_indices(preds, c, "predicted");
  check_indices(golds, c, "gold");
  ConfusionMatrix cm{scale, std::vector<long>(static_cast<size_t>(c) * c, 0), 0};
  for (size_t i = 0; i < preds.size(); ++i) {
    ++cm.at(golds[i], preds[i]);
    ++cm.total;
  }
  return cm;
}

ClassPRF f1_class(const ConfusionMatrix& cm, int c) {
  int n = cm.scale.num_classes();
  if (c < 0 || c >= n) throw DataError("f1_class: class index out of range");
  long tp = cm.at(c, c);
  long fp = 0, fn = 0;
  for (int g = 0; g < n; ++g)
    if (g != c) fp += cm.at(g, c);
  for (int p = 0; p < n; ++p)
    if (p != c) fn += cm.at(c, p);
  ClassPRF r;
  r.precision = (tp + fp) == 0 ? 0.0 : double(tp) / double(tp + fp);
  r.recall = (tp + fn) == 0 ? 0.0 : double(tp) / double(tp + fn);
  r.f1 = (r.precision + r.recall) == 0 ? 0.0
                                       : 2 * r.precision * r.recall /
                                             (r.precision + r.recall);
  return r;
}

ClassificationScores classification_scores(const ConfusionMatrix& cm) {
  if (cm.total == 0) throw DataError("classification_scores: no scored examples");
  int c = cm.scale.num_classes();
  ClassificationScores s;
  long diag = 0;
  double rec_sum = 0, f1_sum = 0;
  for (int i = 0; i < c; ++i) {
    diag += cm.at(i, i);
    ClassPRF prf = f1_class(cm, i);
    rec_sum += prf.recall;
    f1_sum += prf.f1;
  }
  s.acc = double(diag) / double(cm.total);
  s.avg_rec = rec_sum / c;
  s.macro_f1 = f1_sum / c;
  if (cm.scale.kind != ScaleKind::Five) {
    int neg = 0;
    int pos = c - 1;  // ascending sentiment order: last class is positive
    s.f1_pn = (f1_class(cm, pos).f1 + f1_class(cm, neg).f1) / 2.0;
  }
  return s;
}

MaeScores mae_scores(const std::vector<int>& preds, const std::vector<int>& golds,
                     const Scale& scale) {
  if (scale.kind == ScaleKind::Two)
    throw DataError("mae_scores requires a Three or Five scale");
  if (preds.size() != golds.size())
    throw DataError("mae_scores: prediction/gold length mismatch");
  if (preds.empty()) throw DataError("mae_scores: empty input");
  int c = scale.num_classes();
  check_indices(preds, c, "predicted");
  check_indices(golds, c, "gold");

  std::vector<double> err_sum(c, 0);
  std::vector<long> gold_count(c, 0);
  double total_err = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    double e = std::abs(scale.class_int(preds[i]) - scale.class_int(golds[i]));
    err_sum[golds[i]] += e;
    ++gold_count[golds[i]];
    total_err += e;
  }
  MaeScores r;
  r.micro = total_err / double(preds.size());
  int present = 0;
  for (int g = 0; g < c; ++g)
    if (gold_count[g] > 0) {
      double mean = err_sum[g] / double(gold_count[g]);
      r.per_class.emplace_back(g, mean);
      r.macro += mean;
      ++present;
    }
  r.macro /= present;  // classes absent from gold are excluded
  return r;
}

SentimentDistribution make_distribution(const Scale& scale, std::vector<double> p) {
  SentimentDistribution d{scale, std::move(p)};
  check_distribution(d, "sentiment");
  return d;
}

double kld(const SentimentDistribution& true_p, const SentimentDistribution& pred_p,
           long long test_size) {
  if (!(true_p.scale == pred_p.scale))
    throw DataError("kld: scale mismatch");
  if (test_size <= 0) throw DataError("kld: test size must be positive");
  check_distribution(true_p, "true");
  check_distribution(pred_p, "predicted");
  double eps = 1.0 / (2.0 * static_cast<double>(test_size));
  std::vector<double> p = smooth(true_p.p, eps);
  std::vector<double> q = smooth(pred_p.p, eps);
  double sum = 0;
  for (size_t i = 0; i < p.size(); ++i) sum += p[i] * std::log(p[i] / q[i]);
  return sum;
}

AbsErrors abs_errors(const SentimentDistribution& true_p,
                     const SentimentDistribution& pred_p, long long test_size) {
  if (!(true_p.scale == pred_p.scale))
    throw DataError("abs_errors: scale mismatch");
  if (test_size <= 0) throw DataError("abs_errors: test size must be positive");
  check_distribution(true_p, "true");
  check_distribution(pred_p, "predicted");
  size_t c = true_p.p.size();
  double eps = 1.0 / (2.0 * static_cast<double>(test_size));
  std::vector<double> ps = smooth(true_p.p, eps);
  std::vector<double> qs = smooth(pred_p.p, eps);
  AbsErrors r;
  for (size_t i = 0; i < c; ++i) {
    r.ae += std::abs(pred_p.p[i] - true_p.p[i]);
    r.rae += std::abs(qs[i] - ps[i]) / ps[i];
  }
  r.ae /= double(c);
  r.rae /= double(c);
  return r;
}

double emd(const SentimentDistribution& true_p, const SentimentDistribution& pred_p) {
  if (!(true_p.scale == pred_p.scale))
    throw DataError("emd: scale mismatch");
  check_distribution(true_p, "true");
  check_distribution(pred_p, "predicted");
  double cum_t = 0, cum_q = 0, sum = 0;
  for (size_t i = 0; i + 1 < true_p.p.size(); ++i) {
    cum_t += true_p.p[i];
    cum_q += pred_p.p[i];
    sum += std::abs(cum_q - cum_t);
  }
  return sum;
}

void print_report_table(const MetricReport& report, std::ostream& out) {
  size_t width = 0;
  for (const auto& [name, _] : report) width = std::max(width, name.size());
  for (const auto& [name, value] : report) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    out << name << std::string(width - name.size() + 2, ' ') << buf << '\n';
  }
}

void print_report_machine(const MetricReport& report, std::ostream& out) {
  for (const auto& [name, value] : report) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    out << name << '=' << buf << '\n';
  }
}

}  // namespace sccnn
