#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "toba/graph.hpp"

namespace toba {

/// Node index sets optionally stored alongside a graph.
struct IndexSets {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;
  friend bool operator==(const IndexSets&, const IndexSets&) = default;
};

struct GraphDocument {
  Graph graph;
  std::optional<IndexSets> split;
};

/// Significant decimal digits used when writing features.
inline constexpr int kFeatureDigits = 9;

/// Rounds a value to the precision the graph file stores.
double round_to_file_precision(double v);

/// Parses the JSON graph format:
///
///   {"n": 3, "d": 2, "m": 2,
///    "edges": [[0, 1], [1, 2]],
///    "x": [[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]],
///    "y": [0, 1, 1],
///    "train": [0, 1], "val": [], "test": [2]}      // optional
///
/// Unknown fields are rejected. Errors carry the offending field path, and
/// syntax errors the line and column.
GraphDocument parse_graph_document(const std::string& text);
GraphDocument load_graph_document(const std::filesystem::path& path);
Graph load_graph(const std::filesystem::path& path);

std::string serialize_graph(const Graph& g, const std::optional<IndexSets>& split = std::nullopt);
void save_graph(const std::filesystem::path& path, const Graph& g,
                const std::optional<IndexSets>& split = std::nullopt);

}  // namespace toba
