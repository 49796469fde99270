#include "sccnn/cnn.hpp"

#include <cmath>

#include "sccnn/errors.hpp"
#include "sccnn/ordinal.hpp"

namespace sccnn {

namespace {

// Stacks the example's embedding rows into an n x k matrix.
Eigen::MatrixXd gather(const Eigen::MatrixXd& embeddings,
                       const std::vector<int>& indices) {
  Eigen::MatrixXd m(indices.size(), embeddings.cols());
  for (size_t i = 0; i < indices.size(); ++i) {
    int row = indices[i];
    if (row < 0 || row >= embeddings.rows())
      throw DataError("embedding row " + std::to_string(row) + " out of range");
    m.row(i) = embeddings.row(row);
  }
  return m;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd z = logits.array() - logits.maxCoeff();
  Eigen::VectorXd e = z.array().exp();
  return e / e.sum();
}

ForwardTrace forward_impl(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                          const EncodedExample& example, const Eigen::VectorXd* mask,
                          double keep_prob) {
  if (static_cast<int>(example.indices.size()) != params.n)
    throw DataError("example length " + std::to_string(example.indices.size()) +
                    " does not match model n=" + std::to_string(params.n));
  int f_total = params.total_filters();
  if (mask && mask->size() != f_total)
    throw DataError("dropout mask length " + std::to_string(mask->size()) +
                    " does not match filter count " + std::to_string(f_total));

  Eigen::MatrixXd embedded = gather(embeddings, example.indices);

  ForwardTrace trace;
  trace.pooled.resize(f_total);
  trace.argmax.resize(f_total);
  trace.maps.reserve(params.window_sizes.size());

  int f = 0;
  for (size_t g = 0; g < params.window_sizes.size(); ++g) {
    int h = params.window_sizes[g];
    if (params.n < h)
      throw DataError("window size " + std::to_string(h) + " exceeds n=" +
                      std::to_string(params.n));
    int positions = params.n - h + 1;
    int maps = params.maps_per_window[g];
    Eigen::MatrixXd group_maps(positions, maps);

    // One window of h stacked rows, reused across filters of this group.
    Eigen::VectorXd window(h * params.k);
    for (int i = 0; i < positions; ++i) {
      for (int j = 0; j < h; ++j)
        window.segment(static_cast<Eigen::Index>(j) * params.k, params.k) =
            embedded.row(i + j);
      for (int m = 0; m < maps; ++m) {
        double pre = params.filter_w[g].row(m).dot(window) + params.filter_b[g][m];
        group_maps(i, m) = pre > 0 ? pre : 0.0;
      }
    }
    for (int m = 0; m < maps; ++m) {
      auto [value, pos] = max_pool(group_maps.col(m));
      trace.pooled[f] = value;
      trace.argmax[f] = pos;
      ++f;
    }
    trace.maps.push_back(std::move(group_maps));
  }

  if (mask) {
    trace.dropout_mask = *mask;
    trace.keep_prob = keep_prob;
    trace.dropped = trace.pooled.cwiseProduct(*mask) / keep_prob;
  } else {
    trace.dropped = trace.pooled;
  }

  trace.logits = params.out_w * trace.dropped + params.out_b;
  if (params.ordinal_head) {
    trace.probs.resize(trace.logits.size());
    for (Eigen::Index i = 0; i < trace.logits.size(); ++i)
      trace.probs[i] = stable_sigmoid(trace.logits[i]);
  } else {
    trace.probs = softmax(trace.logits);
  }
  return trace;
}

double squared_weight_norm(const CnnParams& params) {
  double sum = params.out_w.squaredNorm();
  for (const auto& w : params.filter_w) sum += w.squaredNorm();
  return sum;
}

}  // namespace

int CnnParams::total_filters() const {
  int total = 0;
  for (int m : maps_per_window) total += m;
  return total;
}

CnnParams init_params(int k, int n, int num_classes,
                      const std::vector<int>& window_sizes,
                      const std::vector<int>& maps_per_window, bool ordinal_head,
                      std::mt19937_64& rng) {
  if (window_sizes.empty() || window_sizes.size() != maps_per_window.size())
    throw DataError("window sizes and map counts must be non-empty and parallel");
  CnnParams p;
  p.k = k;
  p.n = n;
  p.num_classes = num_classes;
  p.window_sizes = window_sizes;
  p.maps_per_window = maps_per_window;
  p.ordinal_head = ordinal_head;

  std::uniform_real_distribution<double> dist(-0.05, 0.05);
  for (size_t g = 0; g < window_sizes.size(); ++g) {
    int h = window_sizes[g];
    int maps = maps_per_window[g];
    if (h < 1 || h > n)
      throw DataError("window size " + std::to_string(h) + " invalid for n=" +
                      std::to_string(n));
    Eigen::MatrixXd w(maps, h * k);
    for (int r = 0; r < maps; ++r)
      for (int c = 0; c < h * k; ++c) w(r, c) = dist(rng);
    p.filter_w.push_back(std::move(w));
    p.filter_b.push_back(Eigen::VectorXd::Zero(maps));
  }
  int out = p.out_dim();
  int f_total = p.total_filters();
  p.out_w.resize(out, f_total);
  for (int r = 0; r < out; ++r)
    for (int c = 0; c < f_total; ++c) p.out_w(r, c) = dist(rng);
  p.out_b = Eigen::VectorXd::Zero(out);
  return p;
}

double conv_feature(const Eigen::VectorXd& w, double b,
                    const Eigen::VectorXd& window) {
  if (w.size() != window.size())
    throw DataError("conv_feature: weight length " + std::to_string(w.size()) +
                    " vs window length " + std::to_string(window.size()));
  double pre = w.dot(window) + b;
  return pre > 0 ? pre : 0.0;
}

Eigen::VectorXd feature_map(const Eigen::VectorXd& w, double b, int h,
                            const Eigen::MatrixXd& embeddings,
                            const std::vector<int>& indices) {
  int n = static_cast<int>(indices.size());
  if (h < 1 || n < h)
    throw DataError("feature_map: window size " + std::to_string(h) +
                    " invalid for input length " + std::to_string(n));
  int k = static_cast<int>(embeddings.cols());
  if (w.size() != static_cast<Eigen::Index>(h) * k)
    throw DataError("feature_map: weight length does not match h*k");
  Eigen::MatrixXd embedded = gather(embeddings, indices);
  Eigen::VectorXd map(n - h + 1);
  Eigen::VectorXd window(h * k);
  for (int i = 0; i <= n - h; ++i) {
    for (int j = 0; j < h; ++j)
      window.segment(static_cast<Eigen::Index>(j) * k, k) = embedded.row(i + j);
    map[i] = conv_feature(w, b, window);
  }
  return map;
}

std::pair<double, int> max_pool(const Eigen::VectorXd& map) {
  if (map.size() == 0) throw DataError("max_pool: empty feature map");
  int best = 0;
  for (Eigen::Index i = 1; i < map.size(); ++i)
    if (map[i] > map[best]) best = static_cast<int>(i);
  return {map[best], best};
}

ForwardTrace forward(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                     const EncodedExample& example) {
  return forward_impl(params, embeddings, example, nullptr, 1.0);
}

ForwardTrace forward(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                     const EncodedExample& example, const Eigen::VectorXd& mask,
                     double keep_prob) {
  if (!(keep_prob > 0 && keep_prob <= 1))
    throw DataError("keep probability must be in (0, 1]");
  return forward_impl(params, embeddings, example, &mask, keep_prob);
}

double loss(const ForwardTrace& trace, int label, const CnnParams& params,
            double l2) {
  if (label < 0 || label >= params.num_classes)
    throw DataError("loss: label " + std::to_string(label) + " out of range");
  constexpr double kClamp = 1e-12;
  double data_loss;
  if (params.ordinal_head) {
    data_loss = ordinal_loss(trace.logits, encode_ordinal(label, params.num_classes));
  } else {
    data_loss = -std::log(std::max(trace.probs[label], kClamp));
  }
  return data_loss + 0.5 * l2 * squared_weight_norm(params);
}

Gradients Gradients::zeros_like(const CnnParams& params, int vocab_rows) {
  Gradients g;
  for (size_t i = 0; i < params.filter_w.size(); ++i) {
    g.filter_w.push_back(Eigen::MatrixXd::Zero(params.filter_w[i].rows(),
                                               params.filter_w[i].cols()));
    g.filter_b.push_back(Eigen::VectorXd::Zero(params.filter_b[i].size()));
  }
  g.out_w = Eigen::MatrixXd::Zero(params.out_w.rows(), params.out_w.cols());
  g.out_b = Eigen::VectorXd::Zero(params.out_b.size());
  g.embeddings = Eigen::MatrixXd::Zero(vocab_rows, params.k);
  return g;
}

void Gradients::accumulate(const Gradients& other) {
  for (size_t i = 0; i < filter_w.size(); ++i) {
    filter_w[i] += other.filter_w[i];
    filter_b[i] += other.filter_b[i];
  }
  out_w += other.out_w;
  out_b += other.out_b;
  embeddings += other.embeddings;
}

void Gradients::scale(double factor) {
  for (size_t i = 0; i < filter_w.size(); ++i) {
    filter_w[i] *= factor;
    filter_b[i] *= factor;
  }
  out_w *= factor;
  out_b *= factor;
  embeddings *= factor;
}

Gradients backward(const ForwardTrace& trace, const EncodedExample& example,
                   int label, const CnnParams& params,
                   const Eigen::MatrixXd& embeddings, double l2) {
  int f_total = params.total_filters();
  if (trace.pooled.size() != f_total ||
      trace.maps.size() != params.window_sizes.size() ||
      static_cast<int>(example.indices.size()) != params.n)
    throw DataError("backward: trace does not match the model shape");
  if (label < 0 || label >= params.num_classes)
    throw DataError("backward: label out of range");

  Eigen::VectorXd dlogits;
  if (params.ordinal_head) {
    dlogits = ordinal_loss_grad(trace.logits, encode_ordinal(label, params.num_classes));
  } else {
    dlogits = trace.probs;
    dlogits[label] -= 1.0;
  }

  Gradients g = Gradients::zeros_like(params, static_cast<int>(embeddings.rows()));
  g.out_w = dlogits * trace.dropped.transpose() + l2 * params.out_w;
  g.out_b = dlogits;

  Eigen::VectorXd d_dropped = params.out_w.transpose() * dlogits;
  Eigen::VectorXd d_pooled =
      trace.dropout_mask.size() > 0
          ? (d_dropped.cwiseProduct(trace.dropout_mask) / trace.keep_prob).eval()
          : d_dropped;

  Eigen::MatrixXd embedded = gather(embeddings, example.indices);

  int f = 0;
  for (size_t grp = 0; grp < params.window_sizes.size(); ++grp) {
    int h = params.window_sizes[grp];
    int maps = params.maps_per_window[grp];
    g.filter_w[grp] = l2 * params.filter_w[grp];
    for (int m = 0; m < maps; ++m, ++f) {
      int pos = trace.argmax[f];
      // gradient flows only through the argmax window, and only when the
      // ReLU pre-activation was positive
      if (trace.maps[grp](pos, m) > 0) {
        double dpre = d_pooled[f];
        if (dpre != 0) {
          for (int j = 0; j < h; ++j) {
            g.filter_w[grp].row(m).segment(static_cast<Eigen::Index>(j) * params.k,
                                           params.k) +=
                dpre * embedded.row(pos + j);
            int row = example.indices[pos + j];
            if (row != EmbeddingTable::kPadIndex)
              g.embeddings.row(row) +=
                  dpre * params.filter_w[grp].row(m).segment(
                             static_cast<Eigen::Index>(j) * params.k, params.k);
          }
        }
        g.filter_b[grp][m] = dpre;
      }
    }
  }
  return g;
}

int predict_class(const CnnParams& params, const Eigen::MatrixXd& embeddings,
                  const EncodedExample& example) {
  ForwardTrace trace = forward(params, embeddings, example);
  if (params.ordinal_head) return decode_ordinal(trace.probs);
  int best = 0;
  for (Eigen::Index i = 1; i < trace.probs.size(); ++i)
    if (trace.probs[i] > trace.probs[best]) best = static_cast<int>(i);
  return best;
}

}  // namespace sccnn
