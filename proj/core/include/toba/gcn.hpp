#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "toba/graph.hpp"
#include "toba/matrix.hpp"
#include "toba/propagation.hpp"

namespace toba {

/// Index of the largest entry; ties go to the lowest index.
ClassId argmax_lowest(std::span<const double> row);

/// Row-stochastic class probabilities plus argmax labels for each node.
struct PredictionState {
  Matrix probs;
  std::vector<ClassId> preds;

  static PredictionState from_probs(Matrix probs);
  [[nodiscard]] std::size_t num_nodes() const { return probs.rows(); }
  [[nodiscard]] std::size_t num_classes() const { return probs.cols(); }
};

struct AdamMoments {
  Matrix first;
  Matrix second;
};

/// Weights of a two-layer GCN plus the optimizer state that belongs to them.
struct ModelParams {
  Matrix w1;  // d x h
  Matrix w2;  // h x m
  AdamMoments adam_w1;
  AdamMoments adam_w2;
  std::int64_t step = 0;

  /// Uniform Glorot initialization, bounds +-sqrt(6 / (fan_in + fan_out)).
  static ModelParams glorot(std::size_t in_dim, std::size_t hidden, std::size_t num_classes,
                            std::uint64_t seed);
  /// All-zero weights and moments.
  static ModelParams zeros(std::size_t in_dim, std::size_t hidden, std::size_t num_classes);
};

/// Intermediate values of one forward pass, kept for backward().
struct ForwardCache {
  Matrix xw1;     // x * W1
  Matrix pre;     // op * x * W1
  Matrix hidden;  // relu(pre), times the dropout scale when training
  Matrix logits;  // op * hidden * W2
  Matrix probs;   // softmax(logits)
  Matrix dropout_scale;  // empty in evaluation mode
};

/// logits = op * (relu(op * x * W1) .* scale) * W2, probs = softmax(logits).
/// `dropout_scale` holds 0 or 1/keep per hidden unit and is omitted at
/// evaluation time.
ForwardCache gcn_forward(const ModelParams& params, const PropagationOperator& op,
                         const Matrix& x, const Matrix* dropout_scale = nullptr);

/// Floor applied to probabilities before taking the log.
inline constexpr double kLogClamp = 1e-12;

/// (1/|mask|) * sum_{i in mask} w[y_i] * -log(max(p[i, y_i], eps)).
/// `class_weights` empty means unweighted.
double masked_cross_entropy(const Matrix& probs, std::span<const ClassId> labels,
                            std::span<const NodeId> mask,
                            std::span<const double> class_weights = {});

struct Gradients {
  Matrix w1;
  Matrix w2;
};

/// Analytic gradient of masked_cross_entropy + weight_decay/2 * (|W1|^2 + |W2|^2)
/// for the forward pass recorded in `cache`.
Gradients backward(const ModelParams& params, const ForwardCache& cache,
                   const PropagationOperator& op, const Matrix& x,
                   std::span<const ClassId> labels, std::span<const NodeId> mask,
                   std::span<const double> class_weights, double weight_decay);

}  // namespace toba
