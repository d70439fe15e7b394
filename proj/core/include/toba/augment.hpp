#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "toba/gcn.hpp"
#include "toba/graph.hpp"
#include "toba/matrix.hpp"
#include "toba/split.hpp"

namespace toba {

/// Risk scores of every real node.
struct RiskVector {
  std::vector<double> uncertainty;  // total-variation distance to the one-hot prediction
  std::vector<double> calibrated;   // (u - mu[pred]) / omega[pred]
  std::vector<double> risk;         // max(calibrated, 0)
  std::vector<double> class_mean;   // mu: mean uncertainty per predicted class (0 if empty)
  std::vector<double> class_scale;  // omega: max_train_count / train_counts[j]
};

enum class SimilarityMode { kPrediction, kTopology };

/// Similarity of each node to the classes it was not predicted as. Rows sum
/// to one, or are all zero when no candidate mass exists.
struct SimilarityMatrix {
  Matrix scores;
  SimilarityMode mode = SimilarityMode::kPrediction;
};

/// Link from real node `node` to the virtual super-node of `cls`.
struct VirtualEdge {
  NodeId node = 0;
  ClassId cls = 0;
  friend auto operator<=>(const VirtualEdge&, const VirtualEdge&) = default;
};

/// A graph plus one virtual super-node per class. The virtual node of class
/// j has index base_nodes + j.
struct AugmentedGraph {
  std::size_t base_nodes = 0;
  Matrix virtual_features;  // m x d
  std::vector<ClassId> virtual_labels;
  std::vector<VirtualEdge> virtual_edges;
  Matrix link_probs;  // n x m
  RiskVector risk;

  [[nodiscard]] NodeId virtual_index(ClassId cls) const {
    return base_nodes + static_cast<std::size_t>(cls);
  }
  /// Virtual edges as undirected (node, base_nodes + class) pairs.
  [[nodiscard]] std::vector<Edge> edge_pairs() const;
  /// Nodes with strictly positive risk.
  [[nodiscard]] std::size_t high_risk_count() const;
  [[nodiscard]] double mean_risk() const;
};

/// u_i = 1/2 * sum_j |p_ij - [j == pred_i]|.
std::vector<double> compute_uncertainty(const PredictionState& pred);

/// Class-relative, imbalance-scaled, positively clipped uncertainty.
/// mu_j averages u over every node predicted j, labeled or not.
RiskVector calibrate_risk(std::span<const double> uncertainty, std::span<const ClassId> preds,
                          const Split& split);

/// s_ij = p_ij / (1 - p_i,pred) for j != pred, 0 at pred; all-zero row when
/// the denominator vanishes.
SimilarityMatrix similarity_prediction(const PredictionState& pred);

/// s_ij = (# neighbors predicted j) / (# neighbors not predicted pred_i).
/// Rows without such neighbors fall back to the prediction-based row.
SimilarityMatrix similarity_topology(const AdjacencyList& adj, const PredictionState& pred);
SimilarityMatrix similarity_topology(const Graph& g, const PredictionState& pred);

/// Per-class mean of the features of nodes predicted as that class. A class
/// nobody predicts uses the mean of its training nodes instead.
Matrix build_virtual_nodes(const Matrix& features, std::span<const ClassId> preds,
                           std::span<const ClassId> labels, const Split& split);

/// link_probs[i, j] = risk_i * s_ij.
Matrix link_probabilities(const RiskVector& risk, const SimilarityMatrix& sim);

/// Independent Bernoulli draw per (node, class) entry, in row-major order.
std::vector<VirtualEdge> sample_virtual_edges(const Matrix& link_probs, std::uint64_t seed);

struct AugmentOptions {
  /// Replaces every risk with zero. Only meant for isolating the no-op case.
  bool zero_risk = false;
};

/// One full augmentation pass: risk, similarity, super-nodes, link sampling.
/// `g` supplies topology and features for the nodes covered by `pred`.
AugmentedGraph augment(const Graph& g, const PredictionState& pred, const Split& split,
                       SimilarityMode mode, std::uint64_t seed, const AugmentOptions& options = {});

}  // namespace toba
