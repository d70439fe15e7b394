#include "toba/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "toba/rng.hpp"

namespace toba {

std::vector<Edge> AugmentedGraph::edge_pairs() const {
  std::vector<Edge> out;
  out.reserve(virtual_edges.size());
  for (const auto& e : virtual_edges) out.push_back({e.node, virtual_index(e.cls)});
  return out;
}

std::size_t AugmentedGraph::high_risk_count() const {
  return static_cast<std::size_t>(
      std::count_if(risk.risk.begin(), risk.risk.end(), [](double r) { return r > 0.0; }));
}

double AugmentedGraph::mean_risk() const {
  if (risk.risk.empty()) return 0.0;
  return std::accumulate(risk.risk.begin(), risk.risk.end(), 0.0) /
         static_cast<double>(risk.risk.size());
}

std::vector<double> compute_uncertainty(const PredictionState& pred) {
  std::vector<double> u(pred.num_nodes());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto p = pred.probs.row(i);
    const auto hat = static_cast<std::size_t>(pred.preds[i]);
    double tv = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) tv += std::abs(p[j] - (j == hat ? 1.0 : 0.0));
    u[i] = 0.5 * tv;
  }
  return u;
}

RiskVector calibrate_risk(std::span<const double> uncertainty, std::span<const ClassId> preds,
                          const Split& split) {
  if (uncertainty.size() != preds.size()) {
    throw std::invalid_argument("calibrate_risk: uncertainty and preds differ in length");
  }
  const std::size_t m = split.train_counts.size();
  RiskVector r;
  r.uncertainty.assign(uncertainty.begin(), uncertainty.end());
  r.class_mean.assign(m, 0.0);
  r.class_scale.assign(m, 0.0);

  std::vector<std::size_t> group_size(m, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto c = static_cast<std::size_t>(preds[i]);
    r.class_mean[c] += uncertainty[i];
    ++group_size[c];
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (group_size[c] > 0) r.class_mean[c] /= static_cast<double>(group_size[c]);
    r.class_scale[c] = static_cast<double>(split.max_train_count) /
                       static_cast<double>(split.train_counts[c]);
  }

  r.calibrated.resize(preds.size());
  r.risk.resize(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto c = static_cast<std::size_t>(preds[i]);
    r.calibrated[i] = (uncertainty[i] - r.class_mean[c]) / r.class_scale[c];
    r.risk[i] = std::max(r.calibrated[i], 0.0);
  }
  return r;
}

namespace {

void prediction_row(const PredictionState& pred, std::size_t i, std::span<double> out) {
  const auto p = pred.probs.row(i);
  const auto hat = static_cast<std::size_t>(pred.preds[i]);
  const double z = 1.0 - p[hat];
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (j == hat || z <= 0.0) ? 0.0 : p[j] / z;
  }
}

}  // namespace

SimilarityMatrix similarity_prediction(const PredictionState& pred) {
  SimilarityMatrix s{Matrix(pred.num_nodes(), pred.num_classes()), SimilarityMode::kPrediction};
  for (std::size_t i = 0; i < pred.num_nodes(); ++i) prediction_row(pred, i, s.scores.row(i));
  return s;
}

SimilarityMatrix similarity_topology(const AdjacencyList& adj, const PredictionState& pred) {
  if (adj.size() != pred.num_nodes()) {
    throw std::invalid_argument("similarity_topology: adjacency and predictions differ in size");
  }
  const std::size_t m = pred.num_classes();
  SimilarityMatrix s{Matrix(pred.num_nodes(), m), SimilarityMode::kTopology};
  std::vector<double> counts(m);
  for (std::size_t i = 0; i < pred.num_nodes(); ++i) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (const NodeId k : adj[i]) counts[static_cast<std::size_t>(pred.preds[k])] += 1.0;
    const auto hat = static_cast<std::size_t>(pred.preds[i]);
    const double z = static_cast<double>(adj[i].size()) - counts[hat];
    auto row = s.scores.row(i);
    if (z <= 0.0) {
      prediction_row(pred, i, row);
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) row[j] = j == hat ? 0.0 : counts[j] / z;
  }
  return s;
}

SimilarityMatrix similarity_topology(const Graph& g, const PredictionState& pred) {
  return similarity_topology(neighbor_lists(g), pred);
}

Matrix build_virtual_nodes(const Matrix& features, std::span<const ClassId> preds,
                           std::span<const ClassId> labels, const Split& split) {
  const std::size_t m = split.train_counts.size();
  const std::size_t d = features.cols();
  Matrix out(m, d);
  std::vector<std::size_t> counts(m, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto c = static_cast<std::size_t>(preds[i]);
    auto o = out.row(c);
    const auto x = features.row(i);
    for (std::size_t k = 0; k < d; ++k) o[k] += x[k];
    ++counts[c];
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (counts[c] > 0) continue;
    auto o = out.row(c);
    for (const NodeId i : split.train) {
      if (static_cast<std::size_t>(labels[i]) != c) continue;
      const auto x = features.row(i);
      for (std::size_t k = 0; k < d; ++k) o[k] += x[k];
      ++counts[c];
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (counts[c] == 0) continue;
    const double inv = 1.0 / static_cast<double>(counts[c]);
    for (double& v : out.row(c)) v *= inv;
  }
  return out;
}

Matrix link_probabilities(const RiskVector& risk, const SimilarityMatrix& sim) {
  if (risk.risk.size() != sim.scores.rows()) {
    throw std::invalid_argument("link_probabilities: risk and similarity differ in length");
  }
  Matrix out(sim.scores.rows(), sim.scores.cols());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    const auto s = sim.scores.row(i);
    auto o = out.row(i);
    for (std::size_t j = 0; j < o.size(); ++j) o[j] = risk.risk[i] * s[j];
  }
  return out;
}

std::vector<VirtualEdge> sample_virtual_edges(const Matrix& link_probs, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<VirtualEdge> edges;
  for (std::size_t i = 0; i < link_probs.rows(); ++i) {
    const auto p = link_probs.row(i);
    for (std::size_t j = 0; j < p.size(); ++j) {
      // Draw for every entry so the stream position never depends on p.
      const double u = rng.uniform();
      if (u < p[j]) edges.push_back({i, static_cast<ClassId>(j)});
    }
  }
  return edges;
}

AugmentedGraph augment(const Graph& g, const PredictionState& pred, const Split& split,
                       SimilarityMode mode, std::uint64_t seed, const AugmentOptions& options) {
  if (pred.num_nodes() != g.num_nodes || pred.num_classes() != g.num_classes) {
    throw std::invalid_argument("augment: prediction state does not match graph");
  }
  AugmentedGraph out;
  out.base_nodes = g.num_nodes;

  const auto u = compute_uncertainty(pred);
  out.risk = calibrate_risk(u, pred.preds, split);
  if (options.zero_risk) std::fill(out.risk.risk.begin(), out.risk.risk.end(), 0.0);

  const SimilarityMatrix sim = mode == SimilarityMode::kTopology ? similarity_topology(g, pred)
                                                                 : similarity_prediction(pred);
  out.virtual_features = build_virtual_nodes(g.features, pred.preds, g.labels, split);
  out.virtual_labels.resize(g.num_classes);
  std::iota(out.virtual_labels.begin(), out.virtual_labels.end(), 0);
  out.link_probs = link_probabilities(out.risk, sim);
  out.virtual_edges = sample_virtual_edges(out.link_probs, seed);
  return out;
}

}  // namespace toba
