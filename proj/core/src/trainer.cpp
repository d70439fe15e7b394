#include "toba/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "toba/augment.hpp"
#include "toba/baselines.hpp"
#include "toba/optim.hpp"
#include "toba/propagation.hpp"
#include "toba/rng.hpp"

namespace toba {

namespace {

std::string_view baseline_name(Baseline b) {
  switch (b) {
    case Baseline::kVanilla: return "vanilla";
    case Baseline::kReweight: return "reweight";
    case Baseline::kOversample: return "oversample";
    case Baseline::kSmote: return "smote";
  }
  return "?";
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

std::string Method::name() const {
  std::string out(baseline_name(baseline));
  if (augmentation == Augmentation::kTobaP) out += "+toba_p";
  if (augmentation == Augmentation::kTobaT) out += "+toba_t";
  return out;
}

Method Method::parse(std::string_view text) {
  Method m;
  std::string_view base = text;
  std::string_view aug;
  if (const auto plus = text.find('+'); plus != std::string_view::npos) {
    base = text.substr(0, plus);
    aug = text.substr(plus + 1);
  } else if (text == "toba_p" || text == "toba_t") {
    base = "vanilla";
    aug = text;
  }
  if (base == "vanilla" || base == "none") {
    m.baseline = Baseline::kVanilla;
  } else if (base == "reweight") {
    m.baseline = Baseline::kReweight;
  } else if (base == "oversample") {
    m.baseline = Baseline::kOversample;
  } else if (base == "smote") {
    m.baseline = Baseline::kSmote;
  } else {
    throw std::invalid_argument("unknown baseline '" + std::string(base) + "' in method '" +
                                std::string(text) + "'");
  }
  if (aug.empty() || aug == "none") {
    m.augmentation = Augmentation::kNone;
  } else if (aug == "toba_p") {
    m.augmentation = Augmentation::kTobaP;
  } else if (aug == "toba_t") {
    m.augmentation = Augmentation::kTobaT;
  } else {
    throw std::invalid_argument("unknown augmentation '" + std::string(aug) + "' in method '" +
                                std::string(text) + "'");
  }
  return m;
}

void TrainConfig::validate() const {
  if (hidden == 0) throw std::invalid_argument("train: hidden must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("train: lr must be > 0");
  if (epochs == 0) throw std::invalid_argument("train: epochs must be >= 1");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("train: weight_decay must be >= 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("train: dropout must lie in [0, 1)");
  }
  if (!(lr_factor > 0.0 && lr_factor < 1.0)) {
    throw std::invalid_argument("train: lr_factor must lie in (0, 1)");
  }
  if (granularity == 0) throw std::invalid_argument("train: granularity must be >= 1");
  if (smote_k == 0) throw std::invalid_argument("train: smote_k must be >= 1");
}

Matrix dropout_scale(std::size_t rows, std::size_t cols, double p, std::uint64_t seed) {
  Matrix scale(rows, cols);
  Rng rng(seed);
  const double keep = 1.0 / (1.0 - p);
  for (double& v : scale.values()) v = rng.uniform() < p ? 0.0 : keep;
  return scale;
}

TrainResult train(const Graph& g, const Split& split, const TrainConfig& cfg) {
  cfg.validate();
  g.validate();
  const auto started = Clock::now();
  TrainResult result;

  // Static baselines: reweighting or synthetic minority nodes.
  Graph train_graph = g;
  Split train_split = split;
  std::vector<double> weights;
  switch (cfg.method.baseline) {
    case Baseline::kVanilla:
      break;
    case Baseline::kReweight:
      weights = class_reweight(split);
      break;
    case Baseline::kOversample:
    case Baseline::kSmote: {
      const auto seed = derive_seed(cfg.seed, "baseline");
      const auto aug = cfg.method.baseline == Baseline::kOversample
                           ? oversample(g, split, seed)
                           : smote(g, split, cfg.smote_k, seed);
      auto ext = apply_augmentation(g, split, aug);
      result.synthetic_nodes = aug.size();
      train_graph = std::move(ext.graph);
      train_split = std::move(ext.split);
      break;
    }
  }
  const bool extended = result.synthetic_nodes > 0;

  const PropagationOperator base_op = normalize_adjacency(train_graph);
  const PropagationOperator eval_op = extended ? normalize_adjacency(g) : base_op;

  const std::size_t m = g.num_classes;
  result.params = ModelParams::glorot(g.feature_dim, cfg.hidden, m, derive_seed(cfg.seed, "init"));
  ModelParams& params = result.params;
  PlateauScheduler scheduler(cfg.lr, cfg.patience, cfg.lr_factor);
  double lr = cfg.lr;

  // Inputs of the current training graph; replaced on every ToBA refresh.
  PropagationOperator aug_op;
  Matrix aug_x;
  std::vector<ClassId> aug_labels;
  std::vector<NodeId> aug_mask;
  const PropagationOperator* op = &base_op;
  const Matrix* x = &train_graph.features;
  std::span<const ClassId> labels = train_graph.labels;
  std::span<const NodeId> mask = train_split.train;

  const SimilarityMode mode = cfg.method.augmentation == Augmentation::kTobaT
                                  ? SimilarityMode::kTopology
                                  : SimilarityMode::kPrediction;
  std::size_t current_edges = 0;
  double current_mean_risk = 0.0;
  std::size_t current_high_risk = 0;
  std::size_t total_virtual_edges = 0;
  // Probabilities of the current weights on the (unaugmented) training graph.
  std::optional<Matrix> fresh_probs;

  result.history.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;

    if (cfg.method.uses_toba() && epoch % cfg.granularity == 0) {
      const auto t0 = Clock::now();
      if (!fresh_probs) fresh_probs = gcn_forward(params, base_op, train_graph.features).probs;
      const PredictionState pred = PredictionState::from_probs(std::move(*fresh_probs));
      fresh_probs.reset();
      AugmentOptions opts;
      opts.zero_risk = cfg.force_zero_risk;
      const AugmentedGraph aug =
          augment(train_graph, pred, train_split, mode, derive_seed(cfg.seed, "augment", epoch),
                  opts);
      const auto pairs = aug.edge_pairs();
      aug_op = normalize_adjacency(train_graph, m, pairs);
      aug_x = train_graph.features.vstack(aug.virtual_features);
      op = &aug_op;
      x = &aug_x;
      if (cfg.virtual_in_loss) {
        aug_labels = train_graph.labels;
        aug_labels.insert(aug_labels.end(), aug.virtual_labels.begin(), aug.virtual_labels.end());
        aug_mask = train_split.train;
        for (std::size_t j = 0; j < m; ++j) aug_mask.push_back(train_graph.num_nodes + j);
        labels = aug_labels;
        mask = aug_mask;
      }
      current_edges = pairs.size();
      current_mean_risk = aug.mean_risk();
      current_high_risk = aug.high_risk_count();
      total_virtual_edges += current_edges;
      ++result.augment_invocations;
      result.augment_ms += elapsed_ms(t0);
      rec.augmented = true;
    }

    const Matrix scale =
        cfg.dropout > 0.0
            ? dropout_scale(op->num_nodes, cfg.hidden, cfg.dropout,
                            derive_seed(cfg.seed, "dropout", epoch))
            : Matrix();
    const ForwardCache cache = gcn_forward(params, *op, *x, cfg.dropout > 0.0 ? &scale : nullptr);
    rec.train_loss = masked_cross_entropy(cache.probs, labels, mask, weights);
    const Gradients grads =
        backward(params, cache, *op, *x, labels, mask, weights, cfg.weight_decay);
    rec.lr = lr;
    adam_step(params, grads, lr);

    Matrix eval_probs = gcn_forward(params, eval_op, g.features).probs;
    rec.val_loss = split.val.empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : masked_cross_entropy(eval_probs, g.labels, split.val);
    if (!split.val.empty()) lr = scheduler.step(rec.val_loss);
    if (!extended) fresh_probs = std::move(eval_probs);

    rec.virtual_edges = current_edges;
    rec.mean_risk = current_mean_risk;
    rec.high_risk_nodes = current_high_risk;
    result.history.push_back(rec);
  }

  result.predictions =
      PredictionState::from_probs(gcn_forward(params, eval_op, g.features).probs);
  result.metrics = evaluate(result.predictions.preds, g.labels, split.test, m);
  result.metrics.runtime_ms = elapsed_ms(started);
  if (result.augment_invocations > 0 && !g.edges.empty()) {
    result.metrics.virtual_edge_ratio = static_cast<double>(total_virtual_edges) /
                                        static_cast<double>(result.augment_invocations) /
                                        static_cast<double>(g.edges.size());
  }
  return result;
}

}  // namespace toba
