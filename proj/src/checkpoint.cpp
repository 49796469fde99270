#include "sccnn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "sccnn/errors.hpp"

namespace sccnn {

namespace {

void write_f64_le(std::ostream& out, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

double read_f64_le(std::istream& in) {
  char bytes[8];
  in.read(bytes, 8);
  if (in.gcount() != 8) throw DataError("corrupt checkpoint: truncated parameter data");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  return std::bit_cast<double>(bits);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_f64_le(out, m(r, c));
}

void read_matrix(std::istream& in, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = read_f64_le(in);
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) write_f64_le(out, v[i]);
}

void read_vector(std::istream& in, Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = read_f64_le(in);
}

long parse_long(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(std::string("corrupt checkpoint: bad ") + what + " '" + s + "'");
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<std::string>& vocab,
                     const CnnParams& params, const Eigen::MatrixXd& embeddings) {
  if (embeddings.rows() != static_cast<Eigen::Index>(vocab.size()) ||
      embeddings.cols() != params.k)
    throw DataError("checkpoint: embedding matrix does not match vocab/k");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open checkpoint for writing: " + path);

  out << "sccnn v1 k=" << params.k << " n=" << params.n
      << " C=" << params.num_classes << " windows=";
  for (size_t g = 0; g < params.window_sizes.size(); ++g) {
    if (g) out << ',';
    out << params.window_sizes[g] << ':' << params.maps_per_window[g];
  }
  if (params.ordinal_head) out << " head=ordinal";
  out << '\n';

  out << vocab.size() << '\n';
  for (const auto& token : vocab) out << token << '\n';

  write_matrix(out, embeddings);
  for (const auto& w : params.filter_w) write_matrix(out, w);
  write_matrix(out, params.out_w);
  for (const auto& b : params.filter_b) write_vector(out, b);
  write_vector(out, params.out_b);
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);

  std::string header;
  if (!std::getline(in, header)) throw DataError("corrupt checkpoint: empty file");
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != "sccnn" || version != "v1")
    throw DataError("corrupt checkpoint: bad magic/version in '" + path + "'");

  Checkpoint ckpt;
  CnnParams& p = ckpt.params;
  bool saw_k = false, saw_n = false, saw_c = false, saw_windows = false;
  std::string field;
  while (hs >> field) {
    size_t eq = field.find('=');
    if (eq == std::string::npos)
      throw DataError("corrupt checkpoint: bad header field '" + field + "'");
    std::string key = field.substr(0, eq);
    std::string value = field.substr(eq + 1);
    if (key == "k") {
      p.k = static_cast<int>(parse_long(value, "k"));
      saw_k = true;
    } else if (key == "n") {
      p.n = static_cast<int>(parse_long(value, "n"));
      saw_n = true;
    } else if (key == "C") {
      p.num_classes = static_cast<int>(parse_long(value, "C"));
      saw_c = true;
    } else if (key == "windows") {
      std::istringstream ws(value);
      std::string item;
      while (std::getline(ws, item, ',')) {
        size_t colon = item.find(':');
        if (colon == std::string::npos)
          throw DataError("corrupt checkpoint: bad window spec '" + item + "'");
        p.window_sizes.push_back(
            static_cast<int>(parse_long(item.substr(0, colon), "window size")));
        p.maps_per_window.push_back(
            static_cast<int>(parse_long(item.substr(colon + 1), "map count")));
      }
      saw_windows = true;
    } else if (key == "head") {
      if (value != "ordinal")
        throw DataError("corrupt checkpoint: unknown head '" + value + "'");
      p.ordinal_head = true;
    } else {
      throw DataError("corrupt checkpoint: unknown header key '" + key + "'");
    }
  }
  if (!saw_k || !saw_n || !saw_c || !saw_windows || p.window_sizes.empty())
    throw DataError("corrupt checkpoint: incomplete header");
  if (p.k <= 0 || p.n <= 0 ||
      (p.num_classes != 2 && p.num_classes != 3 && p.num_classes != 5))
    throw DataError("corrupt checkpoint: invalid dimensions");

  std::string count_line;
  if (!std::getline(in, count_line))
    throw DataError("corrupt checkpoint: missing vocab count");
  long vocab_size = parse_long(count_line, "vocab count");
  if (vocab_size <= 0) throw DataError("corrupt checkpoint: empty vocabulary");
  ckpt.vocab.reserve(vocab_size);
  for (long i = 0; i < vocab_size; ++i) {
    std::string token;
    if (!std::getline(in, token))
      throw DataError("corrupt checkpoint: truncated vocabulary");
    ckpt.vocab.push_back(std::move(token));
  }

  ckpt.embeddings.resize(vocab_size, p.k);
  read_matrix(in, ckpt.embeddings);
  for (size_t g = 0; g < p.window_sizes.size(); ++g) {
    Eigen::MatrixXd w(p.maps_per_window[g],
                      static_cast<Eigen::Index>(p.window_sizes[g]) * p.k);
    read_matrix(in, w);
    p.filter_w.push_back(std::move(w));
  }
  p.out_w.resize(p.out_dim(), p.total_filters());
  read_matrix(in, p.out_w);
  for (size_t g = 0; g < p.window_sizes.size(); ++g) {
    Eigen::VectorXd b(p.maps_per_window[g]);
    read_vector(in, b);
    p.filter_b.push_back(std::move(b));
  }
  p.out_b.resize(p.out_dim());
  read_vector(in, p.out_b);

  char extra;
  if (in.read(&extra, 1) && in.gcount() == 1)
    throw DataError("corrupt checkpoint: trailing data");
  return ckpt;
}

EmbeddingTable table_from_checkpoint(const Checkpoint& ckpt) {
  EmbeddingTable table;
  table.dim = ckpt.params.k;
  table.tokens = ckpt.vocab;
  table.vectors = ckpt.embeddings;
  for (size_t i = 0; i < table.tokens.size(); ++i)
    table.index.emplace(table.tokens[i], static_cast<int>(i));
  if (table.tokens.empty() || table.tokens[0] != EmbeddingTable::pad_token())
    throw DataError("corrupt checkpoint: first vocab entry must be the pad token");
  return table;
}

}  // namespace sccnn
