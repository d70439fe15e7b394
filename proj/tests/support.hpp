#pragma once

// Shared generators and brute-force oracles for the unit tests.

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "toba/graph.hpp"
#include "toba/matrix.hpp"
#include "toba/rng.hpp"
#include "toba/split.hpp"

namespace toba::fixtures {

// Erdos-Renyi graph with Gaussian features and uniformly random labels,
// re-drawn until every class is present.
inline Graph random_graph(std::size_t n, std::size_t d, std::size_t m, double p,
                          std::uint64_t seed) {
  Rng rng(seed);
  Graph g;
  g.num_nodes = n;
  g.feature_dim = d;
  g.num_classes = m;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) g.edges.push_back({u, v});
    }
  }
  g.features = Matrix(n, d);
  for (double& v : g.features.values()) v = rng.normal();
  g.labels.resize(n);
  for (NodeId i = 0; i < n; ++i) g.labels[i] = static_cast<ClassId>(i < m ? i : rng.index(m));
  return g;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                            double scale = 1.0) {
  Rng rng(seed);
  Matrix out(rows, cols);
  for (double& v : out.values()) v = scale * rng.normal();
  return out;
}

// Random row-stochastic matrix; every few rows is one-hot or has a tie.
inline Matrix random_probs(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix p(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      p(i, j) = -std::log(1.0 - rng.uniform());
      sum += p(i, j);
    }
    for (std::size_t j = 0; j < cols; ++j) p(i, j) /= sum;
    if (i % 7 == 3) {
      for (std::size_t j = 0; j < cols; ++j) p(i, j) = j == i % cols ? 1.0 : 0.0;
    }
  }
  return p;
}

// Dense adjacency with self-loops, built straight from the edge list.
inline std::vector<std::vector<double>> dense_adjacency(std::size_t n,
                                                        const std::vector<Edge>& edges) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    a[e.u][e.v] = 1.0;
    a[e.v][e.u] = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  return a;
}

inline Matrix dense_normalized(std::size_t n, const std::vector<Edge>& edges) {
  const auto a = dense_adjacency(n, edges);
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a[i][j] / std::sqrt(deg[i] * deg[j]);
  }
  return out;
}

// Textbook triple loop, no skipping, no reordering tricks.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

// Split with every node of a class in training except for one test node.
inline Split split_with_counts(const Graph& g, const std::vector<std::size_t>& counts) {
  std::vector<std::size_t> taken(g.num_classes, 0);
  std::vector<NodeId> train, test;
  for (NodeId i = 0; i < g.num_nodes; ++i) {
    const auto c = static_cast<std::size_t>(g.labels[i]);
    if (taken[c] < counts[c]) {
      train.push_back(i);
      ++taken[c];
    } else {
      test.push_back(i);
    }
  }
  return Split::from_indices(g, train, {}, test);
}

}  // namespace toba::fixtures
