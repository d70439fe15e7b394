#pragma once

#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "toba/graph.hpp"

namespace toba {

/// Fraction of each node's neighbors whose label differs from its own;
/// isolated nodes get 0.
std::vector<double> heterophilic_ratio(const Graph& g, std::span<const ClassId> labels);

/// Marker for nodes with no path to a same-class training node.
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Hop distance from every node to the nearest training node sharing its
/// ground-truth label (0 for such training nodes themselves).
std::vector<std::size_t> distance_to_same_class_supervision(const Graph& g,
                                                            std::span<const ClassId> labels,
                                                            std::span<const NodeId> train);

/// One equal-count bin of a score-sorted population.
struct AccuracyBin {
  double center = 0.0;    // mean score in the bin
  double accuracy = 0.0;  // mean of the 0/1 correctness values
  double stddev = 0.0;    // population std of correctness
  std::size_t count = 0;
};

/// Sorts by score (stable, so ties keep input order), splits into `windows`
/// bins of near-equal size ([b*n/w, (b+1)*n/w)), and summarizes each bin.
std::vector<AccuracyBin> binned_accuracy(std::span<const double> scores,
                                         std::span<const int> correct, std::size_t windows);

/// Writes "center,accuracy,std,count" rows with a header line.
void write_bins_csv(std::ostream& os, const std::vector<AccuracyBin>& bins);

}  // namespace toba
