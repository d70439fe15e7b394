#include "toba/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "toba/rng.hpp"

namespace toba {

ClassId argmax_lowest(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;
  }
  return static_cast<ClassId>(best);
}

PredictionState PredictionState::from_probs(Matrix probs) {
  PredictionState s;
  s.preds.resize(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) s.preds[i] = argmax_lowest(probs.row(i));
  s.probs = std::move(probs);
  return s;
}

ModelParams ModelParams::zeros(std::size_t in_dim, std::size_t hidden, std::size_t num_classes) {
  ModelParams p;
  p.w1 = Matrix(in_dim, hidden);
  p.w2 = Matrix(hidden, num_classes);
  p.adam_w1 = {Matrix(in_dim, hidden), Matrix(in_dim, hidden)};
  p.adam_w2 = {Matrix(hidden, num_classes), Matrix(hidden, num_classes)};
  return p;
}

ModelParams ModelParams::glorot(std::size_t in_dim, std::size_t hidden, std::size_t num_classes,
                                std::uint64_t seed) {
  ModelParams p = zeros(in_dim, hidden, num_classes);
  Rng rng(seed);
  const auto init = [&rng](Matrix& w) {
    const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (double& v : w.values()) v = bound * (2.0 * rng.uniform() - 1.0);
  };
  init(p.w1);
  init(p.w2);
  return p;
}

ForwardCache gcn_forward(const ModelParams& params, const PropagationOperator& op,
                         const Matrix& x, const Matrix* dropout_scale) {
  if (x.rows() != op.num_nodes || x.cols() != params.w1.rows()) {
    throw std::invalid_argument("gcn_forward: feature matrix shape does not match operator/W1");
  }
  ForwardCache c;
  c.xw1 = matmul(x, params.w1);
  c.pre = op.apply(c.xw1);
  c.hidden = c.pre;
  for (double& v : c.hidden.values()) v = v > 0.0 ? v : 0.0;
  if (dropout_scale != nullptr) {
    if (dropout_scale->rows() != c.hidden.rows() || dropout_scale->cols() != c.hidden.cols()) {
      throw std::invalid_argument("gcn_forward: dropout mask shape mismatch");
    }
    auto h = c.hidden.values();
    const auto s = dropout_scale->values();
    for (std::size_t k = 0; k < h.size(); ++k) h[k] *= s[k];
    c.dropout_scale = *dropout_scale;
  }
  c.logits = op.apply(matmul(c.hidden, params.w2));
  c.probs = softmax_rows(c.logits);
  return c;
}

namespace {

double class_weight(std::span<const double> weights, ClassId y) {
  return weights.empty() ? 1.0 : weights[static_cast<std::size_t>(y)];
}

void check_loss_inputs(const Matrix& probs, std::span<const ClassId> labels,
                       std::span<const NodeId> mask, std::span<const double> weights) {
  if (mask.empty()) throw std::invalid_argument("masked_cross_entropy: empty mask");
  if (!weights.empty() && weights.size() != probs.cols()) {
    throw std::invalid_argument("masked_cross_entropy: one weight per class required");
  }
  for (const NodeId i : mask) {
    if (i >= probs.rows() || i >= labels.size()) {
      throw std::invalid_argument("masked_cross_entropy: mask index " + std::to_string(i) +
                                  " out of range");
    }
  }
}

}  // namespace

double masked_cross_entropy(const Matrix& probs, std::span<const ClassId> labels,
                            std::span<const NodeId> mask, std::span<const double> class_weights) {
  check_loss_inputs(probs, labels, mask, class_weights);
  double total = 0.0;
  for (const NodeId i : mask) {
    const ClassId y = labels[i];
    const double p = std::max(probs(i, static_cast<std::size_t>(y)), kLogClamp);
    total += class_weight(class_weights, y) * -std::log(p);
  }
  return total / static_cast<double>(mask.size());
}

Gradients backward(const ModelParams& params, const ForwardCache& cache,
                   const PropagationOperator& op, const Matrix& x,
                   std::span<const ClassId> labels, std::span<const NodeId> mask,
                   std::span<const double> class_weights, double weight_decay) {
  check_loss_inputs(cache.probs, labels, mask, class_weights);
  const std::size_t m = cache.probs.cols();

  // d loss / d logits: softmax + cross-entropy, zero where the clamp is active.
  Matrix d_logits(cache.probs.rows(), m);
  const double inv_count = 1.0 / static_cast<double>(mask.size());
  for (const NodeId i : mask) {
    const auto y = static_cast<std::size_t>(labels[i]);
    if (cache.probs(i, y) <= kLogClamp) continue;
    const double coef = class_weight(class_weights, labels[i]) * inv_count;
    auto g = d_logits.row(i);
    const auto p = cache.probs.row(i);
    for (std::size_t j = 0; j < m; ++j) g[j] += coef * (p[j] - (j == y ? 1.0 : 0.0));
  }

  const Matrix d_hw2 = op.apply(d_logits);
  Gradients grads;
  grads.w2 = matmul_at_b(cache.hidden, d_hw2);

  Matrix d_pre = matmul_a_bt(d_hw2, params.w2);
  {
    auto dp = d_pre.values();
    const auto pre = cache.pre.values();
    const bool dropped = !cache.dropout_scale.empty();
    const auto scale = cache.dropout_scale.values();
    for (std::size_t k = 0; k < dp.size(); ++k) {
      if (pre[k] <= 0.0) {
        dp[k] = 0.0;
      } else if (dropped) {
        dp[k] *= scale[k];
      }
    }
  }
  grads.w1 = matmul_at_b(x, op.apply(d_pre));

  if (weight_decay != 0.0) {
    const auto add_decay = [weight_decay](Matrix& g, const Matrix& w) {
      auto gv = g.values();
      const auto wv = w.values();
      for (std::size_t k = 0; k < gv.size(); ++k) gv[k] += weight_decay * wv[k];
    };
    add_decay(grads.w1, params.w1);
    add_decay(grads.w2, params.w2);
  }
  return grads;
}

}  // namespace toba
