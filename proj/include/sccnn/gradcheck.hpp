#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sccnn/cnn.hpp"

namespace sccnn {

struct GradCheckReport {
  struct Group {
    std::string name;
    double max_rel_err = 0;
  };
  std::vector<Group> groups;
  double max_rel_err = 0;
  std::string worst_group;
};

// Compares backward() against central finite differences of loss() over every
// parameter group and every non-pad embedding row. The error per scalar is
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-6). The pad row is a
// frozen constraint, not a variable, and is skipped. Passing a mask checks the
// training-mode path with that fixed mask.
GradCheckReport gradient_check(const CnnParams& params,
                               const Eigen::MatrixXd& embeddings,
                               const EncodedExample& example, int label, double l2,
                               const Eigen::VectorXd* mask = nullptr,
                               double keep_prob = 1.0, double step = 1e-5);

}  // namespace sccnn
