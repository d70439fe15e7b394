#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "toba/graph.hpp"
#include "toba/matrix.hpp"

namespace toba {

/// Symmetrically normalized propagation operator D^-1/2 (A + I) D^-1/2 in CSR
/// form. Column indices within a row are strictly increasing.
struct PropagationOperator {
  std::size_t num_nodes = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  /// op * x. The operator is symmetric, so this also serves as op^T * x.
  [[nodiscard]] Matrix apply(const Matrix& x) const;
  [[nodiscard]] Matrix to_dense() const;
};

/// Builds the operator over g.num_nodes + extra_nodes nodes. `extra_edges`
/// may reference any of those indices and are added symmetrically; isolated
/// extra nodes end up with a single self-loop entry of 1.
PropagationOperator normalize_adjacency(const Graph& g, std::size_t extra_nodes = 0,
                                        std::span<const Edge> extra_edges = {});

}  // namespace toba
