#pragma once

#include <cstdint>
#include <vector>

#include "toba/graph.hpp"
#include "toba/graph_io.hpp"

namespace toba {

/// Disjoint train/validation/test node sets with per-class training counts.
struct Split {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;
  std::vector<std::size_t> train_counts;  // |labeled nodes of class j|
  std::size_t max_train_count = 0;

  /// Builds a Split from index sets, computing the counts and checking that
  /// the sets are disjoint, in range, and that every class has a training node.
  static Split from_indices(const Graph& g, std::vector<NodeId> train, std::vector<NodeId> val,
                            std::vector<NodeId> test);

  [[nodiscard]] IndexSets index_sets() const { return {train, val, test}; }
};

/// Nodes reserved per class for validation when building synthetic splits.
inline constexpr std::size_t kDefaultValPerClass = 30;

/// Minority quota for step imbalance: max(round(base / ir), 1).
std::size_t step_minority_quota(std::size_t base_per_class, double ir);

/// Per-class training counts for step imbalance. The upper floor(m/2) classes
/// (indices ceil(m/2)..m-1) are minority.
std::vector<std::size_t> step_train_counts(std::size_t num_classes, std::size_t base_per_class,
                                           double ir);

/// Training count of the class ranked k (1-based, by descending class size)
/// under power-law imbalance: floor(ir^((m-k)/(m-1))).
std::size_t natural_train_count(std::size_t num_classes, std::size_t rank, double ir);

Split make_step_imbalance_split(const Graph& g, std::size_t base_per_class, double ir,
                                std::uint64_t seed,
                                std::size_t val_per_class = kDefaultValPerClass);

Split make_natural_imbalance_split(const Graph& g, double ir, std::uint64_t seed,
                                   std::size_t val_per_class = kDefaultValPerClass);

/// Samples train/val/test given a target training count per class: train
/// first, then val_per_class validation nodes, the rest to test.
Split make_split_with_counts(const Graph& g, const std::vector<std::size_t>& train_counts,
                             std::uint64_t seed, std::size_t val_per_class);

}  // namespace toba
