#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toba/matrix.hpp"

namespace toba {

using NodeId = std::size_t;
using ClassId = int;

/// Undirected edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Raised when a graph, split, or graph file violates its invariants.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected, unweighted, attributed graph with one integer label per node.
///
/// Edges are kept sorted and unique; a Graph is treated as immutable once
/// validate() has passed.
struct Graph {
  std::size_t num_nodes = 0;
  std::size_t feature_dim = 0;
  std::size_t num_classes = 0;
  std::vector<Edge> edges;
  Matrix features;  // num_nodes x feature_dim
  std::vector<ClassId> labels;

  /// Throws GraphError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const Graph&, const Graph&) = default;
};

/// Sorted neighbor lists derived from the edge list.
using AdjacencyList = std::vector<std::vector<NodeId>>;
AdjacencyList neighbor_lists(const Graph& g);

/// Number of nodes carrying each label.
std::vector<std::size_t> class_sizes(const Graph& g);

/// Sorts, checks, and returns an edge list satisfying the Graph invariants.
/// Accepts pairs in either orientation; rejects self-loops and duplicates.
std::vector<Edge> canonical_edges(std::vector<Edge> edges, std::size_t num_nodes);

struct SbmParams {
  std::vector<std::size_t> block_sizes;
  double p_intra = 0.0;
  double p_inter = 0.0;
  std::size_t feature_dim = 1;
  /// Class j's feature mean is feature_shift along axis (j mod feature_dim).
  double feature_shift = 1.0;
  double noise_sigma = 1.0;

  void validate() const;
};

/// Stochastic block model with Gaussian class-conditional features.
Graph generate_sbm(const SbmParams& params, std::uint64_t seed);

}  // namespace toba
