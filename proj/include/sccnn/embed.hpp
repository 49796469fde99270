#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sccnn {

// Token -> row lookup plus the row vectors themselves. Row 0 is the reserved
// pad token and stays all-zero; it is never updated by training.
struct EmbeddingTable {
  int dim = 0;
  std::vector<std::string> tokens;  // row -> token; tokens[0] == pad_token()
  std::unordered_map<std::string, int> index;
  Eigen::MatrixXd vectors;  // tokens.size() x dim

  static constexpr int kPadIndex = 0;
  static const std::string& pad_token();

  int rows() const { return static_cast<int>(tokens.size()); }
  // Returns the row index or -1 when absent.
  int lookup(std::string_view token) const;

  static EmbeddingTable with_dim(int dim);
};

struct LoadedEmbeddings {
  EmbeddingTable table;
  std::size_t duplicates = 0;  // tokens that appeared more than once (last wins)
};

// Reads the GloVe text format: `token v1 v2 ... vk` per line. Every line must
// carry exactly expected_dim values; a mismatch reports the line number.
// A literal pad token in the file counts as a duplicate and is ignored.
LoadedEmbeddings load_embeddings(std::istream& in, int expected_dim);
LoadedEmbeddings load_embeddings_file(const std::string& path, int expected_dim);

// Vector dimension of the first data line, for callers that must size the
// table before loading.
int detect_embedding_dim_file(const std::string& path);

// Adds a row for every corpus token missing from the table, entries drawn
// i.i.d. uniform on [-0.25, 0.25] from a generator seeded with `seed`.
// Existing rows are untouched. Returns the number of rows added.
std::size_t attach_vocab(EmbeddingTable& table,
                         const std::vector<std::vector<std::string>>& corpus,
                         std::uint64_t seed);

struct EncodedExample {
  std::vector<int> indices;  // length n; positions >= true_len hold the pad row
  int true_len = 0;
  std::optional<int> label;
};

// Maps tokens to row indices, truncating to n and padding the tail. Unknown
// tokens are an error (attach_vocab must have run).
EncodedExample encode(const std::vector<std::string>& tokens,
                      const EmbeddingTable& table, int n);

}  // namespace sccnn
