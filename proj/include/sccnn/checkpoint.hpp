#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sccnn/cnn.hpp"
#include "sccnn/embed.hpp"

namespace sccnn {

// Checkpoint file layout:
//   header line  `sccnn v1 k=<k> n=<n> C=<C> windows=<h:maps,...>[ head=ordinal]`
//   vocab count line, then one token per line
//   parameter arrays as little-endian IEEE-754 doubles, in order:
//     embeddings row-major, filter weights per window group row-major,
//     out_w row-major, filter biases per group, out_b.
// Round-trips bit-exactly.
struct Checkpoint {
  std::vector<std::string> vocab;
  CnnParams params;
  Eigen::MatrixXd embeddings;
};

void save_checkpoint(const std::string& path, const std::vector<std::string>& vocab,
                     const CnnParams& params, const Eigen::MatrixXd& embeddings);

Checkpoint load_checkpoint(const std::string& path);

// Rebuilds the token lookup for a loaded checkpoint.
EmbeddingTable table_from_checkpoint(const Checkpoint& ckpt);

}  // namespace sccnn
