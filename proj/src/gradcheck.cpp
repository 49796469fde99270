#include "sccnn/gradcheck.hpp"

#include <cmath>
#include <functional>

namespace sccnn {

namespace {

double rel_err(double analytic, double numeric) {
  double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / denom;
}

}  // namespace

GradCheckReport gradient_check(const CnnParams& params,
                               const Eigen::MatrixXd& embeddings,
                               const EncodedExample& example, int label, double l2,
                               const Eigen::VectorXd* mask, double keep_prob,
                               double step) {
  CnnParams p = params;
  Eigen::MatrixXd emb = embeddings;

  auto eval_loss = [&]() {
    ForwardTrace trace = mask ? forward(p, emb, example, *mask, keep_prob)
                              : forward(p, emb, example);
    return loss(trace, label, p, l2);
  };
  auto numeric_at = [&](double& cell) {
    double saved = cell;
    cell = saved + step;
    double up = eval_loss();
    cell = saved - step;
    double down = eval_loss();
    cell = saved;
    return (up - down) / (2 * step);
  };

  ForwardTrace trace = mask ? forward(p, emb, example, *mask, keep_prob)
                            : forward(p, emb, example);
  Gradients analytic = backward(trace, example, label, p, emb, l2);

  GradCheckReport report;
  auto check_group = [&](const std::string& name, auto&& cells) {
    GradCheckReport::Group group{name, 0};
    cells(group.max_rel_err);
    report.groups.push_back(group);
    if (group.max_rel_err >= report.max_rel_err) {
      report.max_rel_err = group.max_rel_err;
      report.worst_group = name;
    }
  };

  for (size_t g = 0; g < p.filter_w.size(); ++g) {
    std::string suffix = "[h=" + std::to_string(p.window_sizes[g]) + "]";
    check_group("filter_w" + suffix, [&](double& worst) {
      for (Eigen::Index r = 0; r < p.filter_w[g].rows(); ++r)
        for (Eigen::Index c = 0; c < p.filter_w[g].cols(); ++c)
          worst = std::max(worst, rel_err(analytic.filter_w[g](r, c),
                                          numeric_at(p.filter_w[g](r, c))));
    });
    check_group("filter_b" + suffix, [&](double& worst) {
      for (Eigen::Index i = 0; i < p.filter_b[g].size(); ++i)
        worst = std::max(worst, rel_err(analytic.filter_b[g][i],
                                        numeric_at(p.filter_b[g][i])));
    });
  }
  check_group("out_w", [&](double& worst) {
    for (Eigen::Index r = 0; r < p.out_w.rows(); ++r)
      for (Eigen::Index c = 0; c < p.out_w.cols(); ++c)
        worst = std::max(worst, rel_err(analytic.out_w(r, c),
                                        numeric_at(p.out_w(r, c))));
  });
  check_group("out_b", [&](double& worst) {
    for (Eigen::Index i = 0; i < p.out_b.size(); ++i)
      worst = std::max(worst,
                       rel_err(analytic.out_b[i], numeric_at(p.out_b[i])));
  });
  check_group("embeddings", [&](double& worst) {
    for (Eigen::Index r = 0; r < emb.rows(); ++r) {
      if (r == EmbeddingTable::kPadIndex) continue;
      for (Eigen::Index c = 0; c < emb.cols(); ++c)
        worst = std::max(worst,
                         rel_err(analytic.embeddings(r, c), numeric_at(emb(r, c))));
    }
  });
  return report;
}

}  // namespace sccnn
