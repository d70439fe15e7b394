#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "toba/gcn.hpp"
#include "toba/graph.hpp"
#include "toba/metrics.hpp"
#include "toba/split.hpp"

namespace toba {

enum class Baseline { kVanilla, kReweight, kOversample, kSmote };
enum class Augmentation { kNone, kTobaP, kTobaT };

/// A baseline optionally combined with ToBA, written "reweight+toba_t".
struct Method {
  Baseline baseline = Baseline::kVanilla;
  Augmentation augmentation = Augmentation::kNone;

  [[nodiscard]] std::string name() const;
  /// Accepts "<baseline>", "<baseline>+<toba_p|toba_t>", or a bare
  /// "toba_p"/"toba_t" (meaning vanilla+toba_x). Throws std::invalid_argument.
  static Method parse(std::string_view text);
  [[nodiscard]] bool uses_toba() const { return augmentation != Augmentation::kNone; }

  friend bool operator==(const Method&, const Method&) = default;
};

struct TrainConfig {
  std::size_t hidden = 64;
  double lr = 0.01;
  std::size_t epochs = 2000;
  double weight_decay = 5e-4;
  double dropout = 0.5;
  std::size_t patience = 100;
  double lr_factor = 0.5;
  /// Training iterations between augmentation refreshes.
  std::size_t granularity = 1;
  Method method;
  std::size_t smote_k = 5;
  /// Adds the virtual super-nodes, with their class as label, to the loss.
  bool virtual_in_loss = false;
  /// Forces every ToBA risk to zero (isolated virtual nodes). Test hook.
  bool force_zero_risk = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;  // learning rate used for this epoch's update
  std::size_t virtual_edges = 0;
  double mean_risk = 0.0;
  std::size_t high_risk_nodes = 0;
  bool augmented = false;  // a fresh augmentation was drawn this epoch

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> history;
  /// Predictions of the trained model on the original graph (no synthetic or
  /// virtual nodes), one row per node of the input graph.
  PredictionState predictions;
  /// Metrics on split.test.
  MetricsReport metrics;
  std::size_t augment_invocations = 0;
  double augment_ms = 0.0;
  std::size_t synthetic_nodes = 0;
};

/// Full-batch training: one iteration per epoch. With ToBA enabled the
/// augmentation is redrawn every cfg.granularity epochs from the model's
/// current predictions and reused until the next refresh. Validation loss
/// and the returned predictions always use the original graph.
TrainResult train(const Graph& g, const Split& split, const TrainConfig& cfg);

/// 0 or 1/(1-p) per entry, drawn row-major from the epoch's dropout stream.
Matrix dropout_scale(std::size_t rows, std::size_t cols, double p, std::uint64_t seed);

}  // namespace toba
