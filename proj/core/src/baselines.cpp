#include "toba/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "toba/rng.hpp"

namespace toba {

std::vector<double> class_reweight(const Split& split) {
  const std::size_t m = split.train_counts.size();
  const double total = static_cast<double>(
      std::accumulate(split.train_counts.begin(), split.train_counts.end(), std::size_t{0}));
  std::vector<double> w(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (split.train_counts[j] == 0) throw std::invalid_argument("class_reweight: empty class");
    w[j] = total / (static_cast<double>(m) * static_cast<double>(split.train_counts[j]));
  }
  return w;
}

std::vector<double> smote_interpolate(std::span<const double> seed,
                                      std::span<const double> neighbor, double delta) {
  std::vector<double> out(seed.size());
  for (std::size_t k = 0; k < seed.size(); ++k) out[k] = seed[k] + delta * (neighbor[k] - seed[k]);
  return out;
}

namespace {

std::vector<std::vector<NodeId>> train_by_class(const Graph& g, const Split& split) {
  std::vector<std::vector<NodeId>> out(g.num_classes);
  for (const NodeId i : split.train) out[static_cast<std::size_t>(g.labels[i])].push_back(i);
  return out;
}

// Appends one synthetic node built from `seed_node` with the given features.
void append_synthetic(const Graph& g, const AdjacencyList& adj, NodeId seed_node,
                      std::span<const double> features, BaselineAugmentation& aug,
                      std::vector<double>& feature_buffer) {
  const NodeId new_id = g.num_nodes + aug.labels.size();
  aug.labels.push_back(g.labels[seed_node]);
  aug.seeds.push_back(seed_node);
  feature_buffer.insert(feature_buffer.end(), features.begin(), features.end());
  for (const NodeId nb : adj[seed_node]) aug.edges.push_back({nb, new_id});
  aug.extended_train.push_back(new_id);
}

BaselineAugmentation finish(const Graph& g, BaselineAugmentation aug,
                            const std::vector<double>& feature_buffer) {
  aug.features = Matrix(aug.labels.size(), g.feature_dim);
  std::copy(feature_buffer.begin(), feature_buffer.end(), aug.features.values().begin());
  std::sort(aug.edges.begin(), aug.edges.end());
  return aug;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
  return acc;
}

}  // namespace

BaselineAugmentation oversample(const Graph& g, const Split& split, std::uint64_t seed) {
  const auto by_class = train_by_class(g, split);
  const auto adj = neighbor_lists(g);
  Rng rng(seed);
  BaselineAugmentation aug;
  aug.extended_train = split.train;
  std::vector<double> buffer;
  for (std::size_t c = 0; c < g.num_classes; ++c) {
    const auto& pool = by_class[c];
    for (std::size_t have = pool.size(); have < split.max_train_count; ++have) {
      const NodeId s = pool[rng.index(pool.size())];
      append_synthetic(g, adj, s, g.features.row(s), aug, buffer);
    }
  }
  return finish(g, std::move(aug), buffer);
}

BaselineAugmentation smote(const Graph& g, const Split& split, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("smote: k must be >= 1");
  const auto by_class = train_by_class(g, split);
  const auto adj = neighbor_lists(g);
  Rng rng(seed);
  BaselineAugmentation aug;
  aug.extended_train = split.train;
  std::vector<double> buffer;
  for (std::size_t c = 0; c < g.num_classes; ++c) {
    const auto& pool = by_class[c];
    for (std::size_t have = pool.size(); have < split.max_train_count; ++have) {
      const NodeId s = pool[rng.index(pool.size())];
      const auto sx = g.features.row(s);
      std::vector<std::pair<double, NodeId>> cand;
      for (const NodeId o : pool) {
        if (o != s) cand.emplace_back(squared_distance(sx, g.features.row(o)), o);
      }
      if (cand.empty()) {
        append_synthetic(g, adj, s, sx, aug, buffer);
        continue;
      }
      const std::size_t kk = std::min(k, cand.size());
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk), cand.end());
      const NodeId nb = cand[rng.index(kk)].second;
      const double delta = rng.uniform();
      const auto x = smote_interpolate(sx, g.features.row(nb), delta);
      append_synthetic(g, adj, s, x, aug, buffer);
    }
  }
  return finish(g, std::move(aug), buffer);
}

ExtendedGraph apply_augmentation(const Graph& g, const Split& split,
                                 const BaselineAugmentation& aug) {
  ExtendedGraph out;
  Graph& eg = out.graph;
  eg.num_nodes = g.num_nodes + aug.size();
  eg.feature_dim = g.feature_dim;
  eg.num_classes = g.num_classes;
  eg.features = g.features.vstack(aug.features);
  eg.labels = g.labels;
  eg.labels.insert(eg.labels.end(), aug.labels.begin(), aug.labels.end());
  eg.edges = g.edges;
  eg.edges.insert(eg.edges.end(), aug.edges.begin(), aug.edges.end());
  eg.edges = canonical_edges(std::move(eg.edges), eg.num_nodes);
  eg.validate();
  out.split = Split::from_indices(eg, aug.extended_train, split.val, split.test);
  return out;
}

}  // namespace toba
