#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "toba/graph.hpp"
#include "toba/matrix.hpp"
#include "toba/split.hpp"

namespace toba {

/// Mean-normalized inverse class frequency: w_j = N / (m * n_j).
std::vector<double> class_reweight(const Split& split);

/// Synthetic minority nodes produced before training. Node k of the
/// augmentation gets index g.num_nodes + k in the extended graph.
struct BaselineAugmentation {
  Matrix features;                  // one row per synthetic node
  std::vector<ClassId> labels;
  std::vector<NodeId> seeds;        // original node each synthetic node was derived from
  std::vector<Edge> edges;          // edges touching synthetic nodes, in extended indexing
  std::vector<NodeId> extended_train;  // split.train followed by the synthetic nodes

  [[nodiscard]] std::size_t size() const { return labels.size(); }
};

/// Replicates minority training nodes (with replacement) until every class
/// has max_train_count labeled nodes. Replicas copy their seed's features,
/// label, and edges.
BaselineAugmentation oversample(const Graph& g, const Split& split, std::uint64_t seed);

/// seed + delta * (neighbor - seed).
std::vector<double> smote_interpolate(std::span<const double> seed,
                                      std::span<const double> neighbor, double delta);

/// SMOTE in input-feature space: interpolate between a random minority seed
/// and one of its k nearest same-class training nodes, copying the seed's
/// edges. A class with a single training node falls back to replication.
BaselineAugmentation smote(const Graph& g, const Split& split, std::size_t k, std::uint64_t seed);

/// Graph with the synthetic nodes appended, and the split whose training set
/// is the extended one (validation and test sets unchanged).
struct ExtendedGraph {
  Graph graph;
  Split split;
};
ExtendedGraph apply_augmentation(const Graph& g, const Split& split,
                                 const BaselineAugmentation& aug);

}  // namespace toba
