#include "toba/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "toba/rng.hpp"

namespace toba {

Split Split::from_indices(const Graph& g, std::vector<NodeId> train, std::vector<NodeId> val,
                          std::vector<NodeId> test) {
  std::vector<char> seen(g.num_nodes, 0);
  const auto mark = [&](const std::vector<NodeId>& idx, const char* name) {
    for (const NodeId i : idx) {
      if (i >= g.num_nodes) {
        throw GraphError(std::string(name) + ": node " + std::to_string(i) + " out of range");
      }
      if (seen[i]) {
        throw GraphError(std::string(name) + ": node " + std::to_string(i) +
                         " appears in more than one set");
      }
      seen[i] = 1;
    }
  };
  mark(train, "train");
  mark(val, "val");
  mark(test, "test");

  Split s;
  s.train_counts.assign(g.num_classes, 0);
  for (const NodeId i : train) ++s.train_counts[static_cast<std::size_t>(g.labels[i])];
  for (std::size_t c = 0; c < g.num_classes; ++c) {
    if (s.train_counts[c] == 0) {
      throw GraphError("split: class " + std::to_string(c) + " has no training node");
    }
  }
  s.max_train_count = *std::max_element(s.train_counts.begin(), s.train_counts.end());
  s.train = std::move(train);
  s.val = std::move(val);
  s.test = std::move(test);
  return s;
}

std::size_t step_minority_quota(std::size_t base_per_class, double ir) {
  if (!(ir >= 1.0)) throw GraphError("imbalance ratio must be >= 1");
  const auto q = static_cast<std::size_t>(std::llround(static_cast<double>(base_per_class) / ir));
  return std::max<std::size_t>(q, 1);
}

std::vector<std::size_t> step_train_counts(std::size_t num_classes, std::size_t base_per_class,
                                           double ir) {
  const std::size_t minority = step_minority_quota(base_per_class, ir);
  std::vector<std::size_t> counts(num_classes, base_per_class);
  const std::size_t first_minority = (num_classes + 1) / 2;
  for (std::size_t c = first_minority; c < num_classes; ++c) counts[c] = minority;
  return counts;
}

std::size_t natural_train_count(std::size_t num_classes, std::size_t rank, double ir) {
  if (!(ir >= 1.0)) throw GraphError("imbalance ratio must be >= 1");
  if (num_classes < 2) throw GraphError("natural imbalance requires at least 2 classes");
  if (rank < 1 || rank > num_classes) throw GraphError("natural imbalance: rank out of range");
  const double lambda =
      static_cast<double>(num_classes - rank) / static_cast<double>(num_classes - 1);
  // The small slack keeps exact powers such as 100^0.5 from flooring to 9.
  const double n = std::floor(std::pow(ir, lambda) + 1e-9);
  return std::max<std::size_t>(static_cast<std::size_t>(n), 1);
}

Split make_split_with_counts(const Graph& g, const std::vector<std::size_t>& train_counts,
                             std::uint64_t seed, std::size_t val_per_class) {
  if (train_counts.size() != g.num_classes) throw GraphError("split: one count per class required");
  std::vector<std::vector<NodeId>> by_class(g.num_classes);
  for (NodeId i = 0; i < g.num_nodes; ++i) {
    by_class[static_cast<std::size_t>(g.labels[i])].push_back(i);
  }
  Rng rng(derive_seed(seed, "split"));
  std::vector<NodeId> train, val, test;
  for (std::size_t c = 0; c < g.num_classes; ++c) {
    auto& nodes = by_class[c];
    const std::size_t need = train_counts[c] + val_per_class;
    if (nodes.size() < need) {
      throw GraphError("split: class " + std::to_string(c) + " has " +
                       std::to_string(nodes.size()) + " nodes but needs " + std::to_string(need) +
                       " for train+val");
    }
    rng.shuffle(nodes.begin(), nodes.end());
    const auto t_end = nodes.begin() + static_cast<std::ptrdiff_t>(train_counts[c]);
    const auto v_end = t_end + static_cast<std::ptrdiff_t>(val_per_class);
    train.insert(train.end(), nodes.begin(), t_end);
    val.insert(val.end(), t_end, v_end);
    test.insert(test.end(), v_end, nodes.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  std::sort(test.begin(), test.end());
  return Split::from_indices(g, std::move(train), std::move(val), std::move(test));
}

Split make_step_imbalance_split(const Graph& g, std::size_t base_per_class, double ir,
                                std::uint64_t seed, std::size_t val_per_class) {
  return make_split_with_counts(g, step_train_counts(g.num_classes, base_per_class, ir), seed,
                                val_per_class);
}

Split make_natural_imbalance_split(const Graph& g, double ir, std::uint64_t seed,
                                   std::size_t val_per_class) {
  const auto sizes = class_sizes(g);
  std::vector<std::size_t> order(g.num_classes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
  std::vector<std::size_t> counts(g.num_classes);
  for (std::size_t k = 0; k < order.size(); ++k) {
    counts[order[k]] = natural_train_count(g.num_classes, k + 1, ir);
  }
  return make_split_with_counts(g, counts, seed, val_per_class);
}

}  // namespace toba
