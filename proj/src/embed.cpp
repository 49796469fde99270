#include "sccnn/embed.hpp"

#include <fstream>
#include <istream>
#include <random>
#include <sstream>

#include "sccnn/errors.hpp"

namespace sccnn {

const std::string& EmbeddingTable::pad_token() {
  static const std::string pad = "<pad>";
  return pad;
}

int EmbeddingTable::lookup(std::string_view token) const {
  auto it = index.find(std::string(token));
  return it == index.end() ? -1 : it->second;
}

EmbeddingTable EmbeddingTable::with_dim(int dim) {
  if (dim <= 0) throw DataError("embedding dimension must be positive");
  EmbeddingTable t;
  t.dim = dim;
  t.tokens.push_back(pad_token());
  t.index.emplace(pad_token(), kPadIndex);
  t.vectors = Eigen::MatrixXd::Zero(1, dim);
  return t;
}

LoadedEmbeddings load_embeddings(std::istream& in, int expected_dim) {
  LoadedEmbeddings result;
  result.table = EmbeddingTable::with_dim(expected_dim);
  EmbeddingTable& table = result.table;

  std::vector<std::string> pending_tokens;
  std::vector<double> pending_values;  // row-major staging buffer

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream ss(line);
    std::string token;
    ss >> token;
    std::vector<double> values;
    values.reserve(expected_dim);
    double v;
    while (ss >> v) values.push_back(v);
    if (!ss.eof())
      throw DataError("embeddings line " + std::to_string(line_no) +
                      ": malformed value");
    if (static_cast<int>(values.size()) != expected_dim)
      throw DataError("embeddings line " + std::to_string(line_no) + ": expected " +
                      std::to_string(expected_dim) + " values, got " +
                      std::to_string(values.size()));

    if (token == EmbeddingTable::pad_token()) {
      ++result.duplicates;  // pad row is reserved and stays zero
      continue;
    }
    auto it = table.index.find(token);
    if (it != table.index.end()) {
      // Last occurrence wins; rows are staged, so patch the staging buffer.
      ++result.duplicates;
      size_t p = static_cast<size_t>(it->second) - 1;  // row 0 is the pad
      for (int j = 0; j < expected_dim; ++j)
        pending_values[p * expected_dim + j] = values[j];
      continue;
    }
    table.index.emplace(token, static_cast<int>(table.tokens.size() +
                                                pending_tokens.size()));
    pending_tokens.push_back(token);
    pending_values.insert(pending_values.end(), values.begin(), values.end());
  }

  int old_rows = table.rows();
  int new_rows = old_rows + static_cast<int>(pending_tokens.size());
  table.vectors.conservativeResize(new_rows, expected_dim);
  for (size_t p = 0; p < pending_tokens.size(); ++p) {
    table.tokens.push_back(pending_tokens[p]);
    for (int j = 0; j < expected_dim; ++j)
      table.vectors(old_rows + static_cast<int>(p), j) =
          pending_values[p * expected_dim + j];
  }
  return result;
}

LoadedEmbeddings load_embeddings_file(const std::string& path, int expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings file: " + path);
  return load_embeddings(in, expected_dim);
}

int detect_embedding_dim_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    int count = 0;
    double v;
    while (ss >> v) ++count;
    if (count <= 0) throw DataError("embeddings file has no vector values: " + path);
    return count;
  }
  throw DataError("embeddings file is empty: " + path);
}

std::size_t attach_vocab(EmbeddingTable& table,
                         const std::vector<std::vector<std::string>>& corpus,
                         std::uint64_t seed) {
  std::vector<std::string> missing;
  for (const auto& seq : corpus)
    for (const auto& tok : seq)
      if (table.index.find(tok) == table.index.end()) {
        table.index.emplace(tok, static_cast<int>(table.tokens.size() +
                                                  missing.size()));
        missing.push_back(tok);
      }
  if (missing.empty()) return 0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.25, 0.25);
  int old_rows = table.rows();
  table.vectors.conservativeResize(old_rows + static_cast<int>(missing.size()),
                                   table.dim);
  for (size_t p = 0; p < missing.size(); ++p) {
    table.tokens.push_back(missing[p]);
    for (int j = 0; j < table.dim; ++j)
      table.vectors(old_rows + static_cast<int>(p), j) = dist(rng);
  }
  return missing.size();
}

EncodedExample encode(const std::vector<std::string>& tokens,
                      const EmbeddingTable& table, int n) {
  if (n <= 0) throw DataError("encode length must be positive");
  EncodedExample ex;
  ex.indices.assign(n, EmbeddingTable::kPadIndex);
  ex.true_len = std::min<int>(static_cast<int>(tokens.size()), n);
  for (int i = 0; i < ex.true_len; ++i) {
    int row = table.lookup(tokens[i]);
    if (row < 0) throw DataError("unknown token '" + tokens[i] + "'");
    ex.indices[i] = row;
  }
  return ex;
}

}  // namespace sccnn
