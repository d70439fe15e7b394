#pragma once

#include <span>
#include <vector>

#include "toba/graph.hpp"

namespace toba {

/// Balanced evaluation summary of one run.
struct MetricsReport {
  double bacc = 0.0;
  double macro_f1 = 0.0;
  double disparity = 0.0;
  std::vector<double> per_class_acc;  // NaN for classes absent from the mask
  double runtime_ms = 0.0;
  double virtual_edge_ratio = 0.0;  // mean virtual edges per augmentation / original edges
};

/// Per-class accuracy (recall) over `mask`. Classes without any masked node
/// get NaN and are skipped by the macro averages below.
std::vector<double> per_class_accuracy(std::span<const ClassId> preds,
                                       std::span<const ClassId> labels,
                                       std::span<const NodeId> mask, std::size_t num_classes);

double balanced_accuracy(std::span<const ClassId> preds, std::span<const ClassId> labels,
                         std::span<const NodeId> mask, std::size_t num_classes);

/// Mean one-vs-rest F1 over classes present in the mask; a present class that
/// is never predicted correctly contributes 0.
double macro_f1(std::span<const ClassId> preds, std::span<const ClassId> labels,
                std::span<const NodeId> mask, std::size_t num_classes);

/// Population standard deviation of the per-class accuracies.
double disparity(std::span<const ClassId> preds, std::span<const ClassId> labels,
                 std::span<const NodeId> mask, std::size_t num_classes);

MetricsReport evaluate(std::span<const ClassId> preds, std::span<const ClassId> labels,
                       std::span<const NodeId> mask, std::size_t num_classes);

}  // namespace toba
