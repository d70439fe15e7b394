#include "toba/graph_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace toba {

namespace {

using json = nlohmann::json;

std::string format_feature(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", kFeatureDigits, v);
  return buf;
}

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::size_t read_count(const json& doc, const char* key) {
  if (!doc.contains(key)) throw GraphError(std::string("missing field '") + key + "'");
  const auto& v = doc.at(key);
  if (!v.is_number_unsigned()) {
    throw GraphError(std::string("field '") + key + "': expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<NodeId> read_index_array(const json& doc, const char* key, std::size_t n) {
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw GraphError(std::string("field '") + key + "': expected an array");
  std::vector<NodeId> out;
  out.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& v = arr[k];
    const std::string where = std::string(key) + "[" + std::to_string(k) + "]";
    if (!v.is_number_unsigned()) throw GraphError(where + ": expected a node index");
    const auto idx = v.get<NodeId>();
    if (idx >= n) throw GraphError(where + ": node " + std::to_string(idx) + " out of range");
    out.push_back(idx);
  }
  return out;
}

}  // namespace

double round_to_file_precision(double v) { return std::strtod(format_feature(v).c_str(), nullptr); }

GraphDocument parse_graph_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GraphError("graph file: syntax error at " + line_context(text, e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw GraphError("graph file: top level must be an object");

  static const std::set<std::string> known = {"n", "d", "m", "edges", "x", "y",
                                              "train", "val", "test"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw GraphError("graph file: unknown field '" + key + "'");
  }

  GraphDocument out;
  Graph& g = out.graph;
  g.num_nodes = read_count(doc, "n");
  g.feature_dim = read_count(doc, "d");
  g.num_classes = read_count(doc, "m");
  for (const char* key : {"edges", "x", "y"}) {
    if (!doc.contains(key)) throw GraphError(std::string("missing field '") + key + "'");
  }

  const auto& edges = doc.at("edges");
  if (!edges.is_array()) throw GraphError("field 'edges': expected an array");
  g.edges.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned()) {
      throw GraphError(where + ": expected a pair of node indices");
    }
    const auto u = e[0].get<NodeId>();
    const auto v = e[1].get<NodeId>();
    if (u == v) throw GraphError(where + ": self-loop on node " + std::to_string(u));
    if (u > v) throw GraphError(where + ": endpoints must satisfy u < v");
    if (v >= g.num_nodes) {
      throw GraphError(where + ": endpoint " + std::to_string(v) + " out of range");
    }
    g.edges.push_back({u, v});
  }
  g.edges = canonical_edges(std::move(g.edges), g.num_nodes);

  const auto& x = doc.at("x");
  if (!x.is_array() || x.size() != g.num_nodes) {
    throw GraphError("field 'x': expected " + std::to_string(g.num_nodes) + " rows");
  }
  g.features = Matrix(g.num_nodes, g.feature_dim);
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    const auto& row = x[i];
    const std::string where = "x[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != g.feature_dim) {
      throw GraphError(where + ": expected " + std::to_string(g.feature_dim) + " values");
    }
    for (std::size_t j = 0; j < g.feature_dim; ++j) {
      if (!row[j].is_number()) {
        throw GraphError(where + "[" + std::to_string(j) + "]: expected a number");
      }
      g.features(i, j) = row[j].get<double>();
    }
  }

  const auto& y = doc.at("y");
  if (!y.is_array() || y.size() != g.num_nodes) {
    throw GraphError("field 'y': expected " + std::to_string(g.num_nodes) + " labels");
  }
  g.labels.resize(g.num_nodes);
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    const std::string where = "y[" + std::to_string(i) + "]";
    if (!y[i].is_number_integer()) throw GraphError(where + ": expected an integer label");
    const auto label = y[i].get<long long>();
    if (label < 0 || static_cast<unsigned long long>(label) >= g.num_classes) {
      throw GraphError(where + ": label " + std::to_string(label) + " out of range [0, " +
                       std::to_string(g.num_classes) + ")");
    }
    g.labels[i] = static_cast<ClassId>(label);
  }
  g.validate();

  const bool any_split = doc.contains("train") || doc.contains("val") || doc.contains("test");
  if (any_split) {
    IndexSets sets;
    if (doc.contains("train")) sets.train = read_index_array(doc, "train", g.num_nodes);
    if (doc.contains("val")) sets.val = read_index_array(doc, "val", g.num_nodes);
    if (doc.contains("test")) sets.test = read_index_array(doc, "test", g.num_nodes);
    std::vector<const char*> owner(g.num_nodes, nullptr);
    for (const auto& [name, set] : {std::pair{"train", &sets.train}, std::pair{"val", &sets.val},
                                    std::pair{"test", &sets.test}}) {
      for (const NodeId i : *set) {
        if (owner[i] != nullptr) {
          throw GraphError(std::string("field '") + name + "': node " + std::to_string(i) +
                           " already listed in '" + owner[i] + "'");
        }
        owner[i] = name;
      }
    }
    out.split = std::move(sets);
  }
  return out;
}

GraphDocument load_graph_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open graph file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_graph_document(ss.str());
  } catch (const GraphError& e) {
    throw GraphError(path.string() + ": " + e.what());
  }
}

Graph load_graph(const std::filesystem::path& path) { return load_graph_document(path).graph; }

std::string serialize_graph(const Graph& g, const std::optional<IndexSets>& split) {
  g.validate();
  std::ostringstream os;
  os << "{\n  \"n\": " << g.num_nodes << ",\n  \"d\": " << g.feature_dim
     << ",\n  \"m\": " << g.num_classes << ",\n  \"edges\": [";
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    os << (k ? ", " : "") << "[" << g.edges[k].u << ", " << g.edges[k].v << "]";
  }
  os << "],\n  \"x\": [";
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    os << (i ? ",\n    [" : "\n    [");
    const auto row = g.features.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!std::isfinite(row[j])) {
        throw GraphError("x[" + std::to_string(i) + "][" + std::to_string(j) +
                         "]: non-finite feature");
      }
      os << (j ? ", " : "") << format_feature(row[j]);
    }
    os << "]";
  }
  os << (g.num_nodes ? "\n  ],\n  \"y\": [" : "],\n  \"y\": [");
  for (std::size_t i = 0; i < g.num_nodes; ++i) os << (i ? ", " : "") << g.labels[i];
  os << "]";
  if (split) {
    const auto write = [&os](const char* key, const std::vector<NodeId>& idx) {
      os << ",\n  \"" << key << "\": [";
      for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? ", " : "") << idx[k];
      os << "]";
    };
    write("train", split->train);
    write("val", split->val);
    write("test", split->test);
  }
  os << "\n}\n";
  return os.str();
}

void save_graph(const std::filesystem::path& path, const Graph& g,
                const std::optional<IndexSets>& split) {
  const std::string text = serialize_graph(g, split);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot write graph file " + path.string());
  out << text;
}

}  // namespace toba
