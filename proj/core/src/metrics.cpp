#include "toba/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace toba {

namespace {

void check_inputs(std::span<const ClassId> preds, std::span<const ClassId> labels,
                  std::span<const NodeId> mask, std::size_t num_classes) {
  if (mask.empty()) throw std::invalid_argument("metrics: empty evaluation mask");
  for (const NodeId i : mask) {
    if (i >= preds.size() || i >= labels.size()) {
      throw std::invalid_argument("metrics: mask index out of range");
    }
    const auto p = preds[i];
    const auto y = labels[i];
    if (p < 0 || static_cast<std::size_t>(p) >= num_classes || y < 0 ||
        static_cast<std::size_t>(y) >= num_classes) {
      throw std::invalid_argument("metrics: class id out of range");
    }
  }
}

double mean_present(const std::vector<double>& v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const double x : v) {
    if (std::isnan(x)) continue;
    sum += x;
    ++n;
  }
  return sum / static_cast<double>(n);
}

}  // namespace

std::vector<double> per_class_accuracy(std::span<const ClassId> preds,
                                       std::span<const ClassId> labels,
                                       std::span<const NodeId> mask, std::size_t num_classes) {
  check_inputs(preds, labels, mask, num_classes);
  std::vector<std::size_t> correct(num_classes, 0), support(num_classes, 0);
  for (const NodeId i : mask) {
    const auto y = static_cast<std::size_t>(labels[i]);
    ++support[y];
    if (preds[i] == labels[i]) ++correct[y];
  }
  std::vector<double> acc(num_classes, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (support[c] > 0) acc[c] = static_cast<double>(correct[c]) / static_cast<double>(support[c]);
  }
  return acc;
}

double balanced_accuracy(std::span<const ClassId> preds, std::span<const ClassId> labels,
                         std::span<const NodeId> mask, std::size_t num_classes) {
  return mean_present(per_class_accuracy(preds, labels, mask, num_classes));
}

double macro_f1(std::span<const ClassId> preds, std::span<const ClassId> labels,
                std::span<const NodeId> mask, std::size_t num_classes) {
  check_inputs(preds, labels, mask, num_classes);
  std::vector<std::size_t> tp(num_classes, 0), predicted(num_classes, 0), support(num_classes, 0);
  for (const NodeId i : mask) {
    const auto y = static_cast<std::size_t>(labels[i]);
    const auto p = static_cast<std::size_t>(preds[i]);
    ++support[y];
    ++predicted[p];
    if (y == p) ++tp[y];
  }
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (support[c] == 0) continue;
    ++present;
    // F1 = 2 TP / (2 TP + FP + FN) = 2 TP / (predicted + support).
    sum += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(predicted[c] + support[c]);
  }
  return sum / static_cast<double>(present);
}

double disparity(std::span<const ClassId> preds, std::span<const ClassId> labels,
                 std::span<const NodeId> mask, std::size_t num_classes) {
  const auto acc = per_class_accuracy(preds, labels, mask, num_classes);
  const double mean = mean_present(acc);
  double sq = 0.0;
  std::size_t n = 0;
  for (const double a : acc) {
    if (std::isnan(a)) continue;
    sq += (a - mean) * (a - mean);
    ++n;
  }
  return std::sqrt(sq / static_cast<double>(n));
}

MetricsReport evaluate(std::span<const ClassId> preds, std::span<const ClassId> labels,
                       std::span<const NodeId> mask, std::size_t num_classes) {
  MetricsReport r;
  r.per_class_acc = per_class_accuracy(preds, labels, mask, num_classes);
  r.bacc = mean_present(r.per_class_acc);
  r.macro_f1 = macro_f1(preds, labels, mask, num_classes);
  r.disparity = disparity(preds, labels, mask, num_classes);
  return r;
}

}  // namespace toba
