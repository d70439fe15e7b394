#include "toba/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "toba/rng.hpp"

namespace toba {

void Graph::validate() const {
  if (num_classes == 0) throw GraphError("graph: num_classes must be positive");
  if (features.rows() != num_nodes || features.cols() != feature_dim) {
    throw GraphError("graph: feature matrix is " + std::to_string(features.rows()) + "x" +
                     std::to_string(features.cols()) + ", expected " +
                     std::to_string(num_nodes) + "x" + std::to_string(feature_dim));
  }
  if (labels.size() != num_nodes) {
    throw GraphError("graph: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(num_nodes) + " nodes");
  }
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) {
      throw GraphError("y[" + std::to_string(i) + "]: label " + std::to_string(labels[i]) +
                       " out of range [0, " + std::to_string(num_classes) + ")");
    }
    ++counts[static_cast<std::size_t>(labels[i])];
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) throw GraphError("graph: class " + std::to_string(c) + " has no nodes");
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (e.u == e.v) throw GraphError(where + ": self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) throw GraphError(where + ": endpoints must satisfy u < v");
    if (e.v >= num_nodes) {
      throw GraphError(where + ": endpoint " + std::to_string(e.v) + " out of range");
    }
    if (k > 0 && !(edges[k - 1] < e)) {
      throw GraphError(where + ": duplicate or unsorted edge (" + std::to_string(e.u) + ", " +
                       std::to_string(e.v) + ")");
    }
  }
}

AdjacencyList neighbor_lists(const Graph& g) {
  AdjacencyList adj(g.num_nodes);
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

std::vector<std::size_t> class_sizes(const Graph& g) {
  std::vector<std::size_t> counts(g.num_classes, 0);
  for (const ClassId y : g.labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

std::vector<Edge> canonical_edges(std::vector<Edge> edges, std::size_t num_nodes) {
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto& e = edges[k];
    if (e.u == e.v) {
      throw GraphError("edges[" + std::to_string(k) + "]: self-loop on node " +
                       std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= num_nodes) {
      throw GraphError("edges[" + std::to_string(k) + "]: endpoint " + std::to_string(e.v) +
                       " out of range");
    }
  }
  std::sort(edges.begin(), edges.end());
  const auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    throw GraphError("duplicate edge (" + std::to_string(dup->u) + ", " + std::to_string(dup->v) +
                     ")");
  }
  return edges;
}

void SbmParams::validate() const {
  if (block_sizes.empty()) throw GraphError("sbm: at least one block required");
  for (const auto b : block_sizes) {
    if (b == 0) throw GraphError("sbm: block sizes must be >= 1");
  }
  if (!(p_inter >= 0.0 && p_inter <= p_intra && p_intra <= 1.0)) {
    throw GraphError("sbm: require 0 <= p_inter <= p_intra <= 1");
  }
  if (feature_dim == 0) throw GraphError("sbm: feature_dim must be >= 1");
  if (!(noise_sigma >= 0.0) || !std::isfinite(feature_shift)) {
    throw GraphError("sbm: feature_shift must be finite and noise_sigma >= 0");
  }
}

Graph generate_sbm(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  Graph g;
  g.num_classes = params.block_sizes.size();
  g.feature_dim = params.feature_dim;
  for (std::size_t b = 0; b < params.block_sizes.size(); ++b) {
    g.labels.insert(g.labels.end(), params.block_sizes[b], static_cast<ClassId>(b));
  }
  g.num_nodes = g.labels.size();

  Rng edge_rng(derive_seed(seed, "sbm.edges"));
  for (NodeId u = 0; u < g.num_nodes; ++u) {
    for (NodeId v = u + 1; v < g.num_nodes; ++v) {
      const double p = g.labels[u] == g.labels[v] ? params.p_intra : params.p_inter;
      if (edge_rng.bernoulli(p)) g.edges.push_back({u, v});
    }
  }

  Rng feat_rng(derive_seed(seed, "sbm.features"));
  g.features = Matrix(g.num_nodes, g.feature_dim);
  for (NodeId i = 0; i < g.num_nodes; ++i) {
    auto row = g.features.row(i);
    for (double& v : row) v = params.noise_sigma * feat_rng.normal();
    row[static_cast<std::size_t>(g.labels[i]) % g.feature_dim] += params.feature_shift;
  }
  g.validate();
  return g;
}

}  // namespace toba
