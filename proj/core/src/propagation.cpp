#include "toba/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace toba {

Matrix PropagationOperator::apply(const Matrix& x) const {
  if (x.rows() != num_nodes) {
    throw std::invalid_argument("PropagationOperator::apply: expected " +
                                std::to_string(num_nodes) + " rows, got " +
                                std::to_string(x.rows()));
  }
  Matrix out(num_nodes, x.cols());
  for (std::size_t i = 0; i < num_nodes; ++i) {
    auto o = out.row(i);
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const double w = val[k];
      const auto xr = x.row(col[k]);
      for (std::size_t j = 0; j < o.size(); ++j) o[j] += w * xr[j];
    }
  }
  return out;
}

Matrix PropagationOperator::to_dense() const {
  Matrix out(num_nodes, num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) out(i, col[k]) = val[k];
  }
  return out;
}

PropagationOperator normalize_adjacency(const Graph& g, std::size_t extra_nodes,
                                        std::span<const Edge> extra_edges) {
  const std::size_t n = g.num_nodes + extra_nodes;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) adj[i].push_back(i);
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (std::size_t k = 0; k < extra_edges.size(); ++k) {
    const auto& e = extra_edges[k];
    if (e.u >= n || e.v >= n) {
      throw GraphError("extra edge " + std::to_string(k) + " (" + std::to_string(e.u) + ", " +
                       std::to_string(e.v) + ") out of range for " + std::to_string(n) +
                       " nodes");
    }
    if (e.u == e.v) throw GraphError("extra edge " + std::to_string(k) + " is a self-loop");
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }

  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& nb = adj[i];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(nb.size()));
  }

  PropagationOperator op;
  op.num_nodes = n;
  op.row_ptr.reserve(n + 1);
  op.row_ptr.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const std::size_t j : adj[i]) {
      op.col.push_back(j);
      op.val.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[j]);
    }
    op.row_ptr.push_back(op.col.size());
  }
  return op;
}

}  // namespace toba
