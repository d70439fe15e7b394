#include "toba/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace toba {

std::vector<double> heterophilic_ratio(const Graph& g, std::span<const ClassId> labels) {
  if (labels.size() != g.num_nodes) {
    throw std::invalid_argument("heterophilic_ratio: one label per node required");
  }
  const auto adj = neighbor_lists(g);
  std::vector<double> out(g.num_nodes, 0.0);
  for (NodeId i = 0; i < g.num_nodes; ++i) {
    if (adj[i].empty()) continue;
    const auto diff = std::count_if(adj[i].begin(), adj[i].end(),
                                    [&](NodeId k) { return labels[k] != labels[i]; });
    out[i] = static_cast<double>(diff) / static_cast<double>(adj[i].size());
  }
  return out;
}

std::vector<std::size_t> distance_to_same_class_supervision(const Graph& g,
                                                            std::span<const ClassId> labels,
                                                            std::span<const NodeId> train) {
  if (train.empty()) throw std::invalid_argument("distance_to_same_class_supervision: empty train");
  const auto adj = neighbor_lists(g);
  std::vector<std::size_t> out(g.num_nodes, kUnreachable);
  // One multi-source BFS per class, seeded with that class's training nodes.
  for (std::size_t c = 0; c < g.num_classes; ++c) {
    std::vector<std::size_t> dist(g.num_nodes, kUnreachable);
    std::deque<NodeId> queue;
    for (const NodeId s : train) {
      if (static_cast<std::size_t>(labels[s]) == c && dist[s] != 0) {
        dist[s] = 0;
        queue.push_back(s);
      }
    }
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (const NodeId v : adj[u]) {
        if (dist[v] == kUnreachable) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (NodeId i = 0; i < g.num_nodes; ++i) {
      if (static_cast<std::size_t>(labels[i]) == c) out[i] = dist[i];
    }
  }
  return out;
}

std::vector<AccuracyBin> binned_accuracy(std::span<const double> scores,
                                         std::span<const int> correct, std::size_t windows) {
  if (windows == 0) throw std::invalid_argument("binned_accuracy: windows must be >= 1");
  if (scores.size() != correct.size()) {
    throw std::invalid_argument("binned_accuracy: scores and correctness differ in length");
  }
  const std::size_t n = scores.size();
  if (n < windows) throw std::invalid_argument("binned_accuracy: fewer nodes than windows");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::vector<AccuracyBin> bins(windows);
  for (std::size_t b = 0; b < windows; ++b) {
    const std::size_t lo = b * n / windows;
    const std::size_t hi = (b + 1) * n / windows;
    auto& bin = bins[b];
    bin.count = hi - lo;
    double score_sum = 0.0, acc_sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      score_sum += scores[order[k]];
      acc_sum += correct[order[k]];
    }
    const double cnt = static_cast<double>(bin.count);
    bin.center = score_sum / cnt;
    bin.accuracy = acc_sum / cnt;
    double var = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      const double dev = correct[order[k]] - bin.accuracy;
      var += dev * dev;
    }
    bin.stddev = std::sqrt(var / cnt);
  }
  return bins;
}

void write_bins_csv(std::ostream& os, const std::vector<AccuracyBin>& bins) {
  os << "center,accuracy,std,count\n";
  for (const auto& b : bins) {
    os << b.center << ',' << b.accuracy << ',' << b.stddev << ',' << b.count << '\n';
  }
}

}  // namespace toba
