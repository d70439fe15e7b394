// Command-line front end: experiment grids, granularity sweeps, diagnostics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "toba/augment.hpp"
#include "toba/diagnostics.hpp"
#include "toba/experiment.hpp"
#include "toba/graph_io.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void print_summary(const toba::ExperimentResult& r) {
  std::printf("%-10s %-22s ir=%-5g bacc %.2f +- %.2f  f1 %.2f +- %.2f  disparity %.2f  (%zu seeds)\n",
              r.config.dataset.name.c_str(), r.config.train.method.name().c_str(),
              r.config.imbalance.ir, 100 * r.bacc.mean, 100 * r.bacc.std, 100 * r.macro_f1.mean,
              100 * r.macro_f1.std, 100 * r.disparity.mean, r.rows.size());
}

int cmd_run(const fs::path& config, const fs::path& out, std::size_t seeds,
            const std::vector<std::string>& overrides, std::size_t jobs) {
  auto grid = toba::load_experiment_grid(config, overrides);
  if (seeds > 0) {
    for (auto& cfg : grid) {
      cfg.seeds.clear();
      for (std::uint64_t s = 0; s < seeds; ++s) cfg.seeds.push_back(s);
    }
  }
  fs::create_directories(out);
  std::vector<toba::ExperimentResult> results;
  std::vector<toba::ResultRow> rows;
  // Cells of a grid share one dataset; load it once.
  std::optional<toba::GraphDocument> graph;
  for (const auto& cfg : grid) {
    if (!graph) graph = toba::load_dataset(cfg.dataset);
    results.push_back(toba::run_experiment(cfg, *graph, nullptr, jobs));
    print_summary(results.back());
    rows.insert(rows.end(), results.back().rows.begin(), results.back().rows.end());
  }
  auto csv = open_out(out / "results.csv");
  toba::write_results_csv(csv, rows);
  auto summary = open_out(out / "summary.json");
  summary << toba::summary_json(results);
  return 0;
}

std::vector<std::size_t> parse_values(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size() || v == 0) throw std::invalid_argument("bad granularity '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no granularity values given");
  return out;
}

int cmd_granularity(const fs::path& config, const std::string& values, const fs::path& out,
                    const std::vector<std::string>& overrides, std::size_t jobs) {
  const auto grid = toba::load_experiment_grid(config, overrides);
  if (grid.size() != 1) {
    throw toba::ConfigError("granularity expects a single method and ir, got a grid of " +
                            std::to_string(grid.size()));
  }
  const auto rows = toba::compare_granularity(grid.front(), parse_values(values), jobs);
  toba::write_granularity_csv(std::cout, rows);
  if (!out.empty()) {
    fs::create_directories(out);
    auto os = open_out(out / "granularity.csv");
    toba::write_granularity_csv(os, rows);
  }
  return 0;
}

toba::Matrix load_probs(const fs::path& path, std::size_t n, std::size_t m) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("probs") ||
      !doc.at("probs").is_array()) {
    throw std::runtime_error(path.string() + ": expected {\"probs\": [[...], ...]}");
  }
  const auto& rows = doc.at("probs");
  if (rows.size() != n) {
    throw std::runtime_error(path.string() + ": " + std::to_string(rows.size()) +
                             " rows, graph has " + std::to_string(n) + " nodes");
  }
  toba::Matrix p(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != m) {
      throw std::runtime_error(path.string() + ": probs[" + std::to_string(i) + "] needs " +
                               std::to_string(m) + " entries");
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (!rows[i][j].is_number()) {
        throw std::runtime_error(path.string() + ": probs[" + std::to_string(i) + "][" +
                                 std::to_string(j) + "] is not a number");
      }
      p(i, j) = rows[i][j].get<double>();
    }
  }
  return p;
}

int cmd_diagnose(const fs::path& graph_path, const fs::path& probs_path, const fs::path& out,
                 std::size_t windows) {
  const auto doc = toba::load_graph_document(graph_path);
  const auto& g = doc.graph;
  const auto pred =
      toba::PredictionState::from_probs(load_probs(probs_path, g.num_nodes, g.num_classes));

  // Population: stored test nodes when the file has a split, otherwise all nodes.
  std::vector<toba::NodeId> population;
  if (doc.split) {
    population = doc.split->test;
  } else {
    for (toba::NodeId i = 0; i < g.num_nodes; ++i) population.push_back(i);
  }
  std::vector<int> correct;
  for (const auto i : population) correct.push_back(pred.preds[i] == g.labels[i] ? 1 : 0);

  const auto gather = [&](const auto& values) {
    std::vector<double> out_scores;
    for (const auto i : population) out_scores.push_back(static_cast<double>(values[i]));
    return out_scores;
  };

  std::vector<std::pair<std::string, std::vector<toba::AccuracyBin>>> tables;
  tables.emplace_back("heterophily",
                      toba::binned_accuracy(gather(toba::heterophilic_ratio(g, g.labels)), correct,
                                            windows));
  if (doc.split && !doc.split->train.empty()) {
    const auto split =
        toba::Split::from_indices(g, doc.split->train, doc.split->val, doc.split->test);
    // Unreachable nodes sort last; score them as n so the bin center stays finite.
    auto dist = toba::distance_to_same_class_supervision(g, g.labels, split.train);
    for (auto& d : dist) {
      if (d == toba::kUnreachable) d = g.num_nodes;
    }
    tables.emplace_back("distance", toba::binned_accuracy(gather(dist), correct, windows));
    const auto risk =
        toba::calibrate_risk(toba::compute_uncertainty(pred), pred.preds, split).risk;
    tables.emplace_back("risk", toba::binned_accuracy(gather(risk), correct, windows));
  }

  if (!out.empty()) fs::create_directories(out);
  for (const auto& [name, bins] : tables) {
    std::cout << "# " << name << '\n';
    toba::write_bins_csv(std::cout, bins);
    if (!out.empty()) {
      auto os = open_out(out / (name + "_bins.csv"));
      toba::write_bins_csv(os, bins);
    }
  }
  return 0;
}

int cmd_generate_sbm(const std::vector<std::size_t>& blocks, double p_intra, double p_inter,
                     std::size_t d, double shift, double sigma, std::uint64_t seed,
                     const fs::path& out) {
  toba::SbmParams p;
  p.block_sizes = blocks;
  p.p_intra = p_intra;
  p.p_inter = p_inter;
  p.feature_dim = d;
  p.feature_shift = shift;
  p.noise_sigma = sigma;
  toba::save_graph(out, toba::generate_sbm(p, seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ToBA experiments for class-imbalanced node classification"};
  app.require_subcommand(1);

  fs::path config, out, graph, probs;
  std::size_t seeds = 0, jobs = 1, windows = 10;
  std::vector<std::string> overrides;
  std::string values = "1,5,10,50,100";
  bool virtual_in_loss = false;

  auto* run = app.add_subcommand("run", "Run an experiment grid and write results.csv/summary.json");
  run->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--seeds", seeds, "Use seeds 0..k-1 instead of the config's list");
  run->add_option("--override", overrides, "dotted.key=value, applied before parsing");
  run->add_flag("--virtual-in-loss", virtual_in_loss, "Put the virtual super-nodes in the loss");
  run->add_option("--jobs", jobs, "Worker threads per cell")->check(CLI::PositiveNumber);

  auto* gran = app.add_subcommand("granularity", "Compare ToBA refresh intervals");
  gran->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  gran->add_option("--values", values, "Comma-separated granularities");
  gran->add_option("--out", out, "Also write granularity.csv here");
  gran->add_option("--override", overrides, "dotted.key=value, applied before parsing");
  gran->add_flag("--virtual-in-loss", virtual_in_loss, "Put the virtual super-nodes in the loss");
  gran->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* diag = app.add_subcommand("diagnose", "Accuracy by heterophily, distance and risk");
  diag->add_option("--graph", graph, "Graph file")->required()->check(CLI::ExistingFile);
  diag->add_option("--probs", probs, "JSON {\"probs\": [[...]]}, one row per node")
      ->required()
      ->check(CLI::ExistingFile);
  diag->add_option("--out", out, "Directory for *_bins.csv");
  diag->add_option("--windows", windows, "Number of equal-count bins")->check(CLI::PositiveNumber);

  std::vector<std::size_t> blocks{100, 100, 100};
  double p_intra = 0.05, p_inter = 0.005, shift = 1.0, sigma = 1.0;
  std::size_t dim = 16;
  std::uint64_t sbm_seed = 0;
  auto* gen = app.add_subcommand("generate-sbm", "Write a stochastic block model graph file");
  gen->add_option("--blocks", blocks, "Block sizes")->delimiter(',');
  gen->add_option("--p-intra", p_intra);
  gen->add_option("--p-inter", p_inter);
  gen->add_option("--dim", dim);
  gen->add_option("--shift", shift, "Class mean offset");
  gen->add_option("--sigma", sigma, "Feature noise");
  gen->add_option("--seed", sbm_seed);
  gen->add_option("--out", out, "Output graph file")->required();

  CLI11_PARSE(app, argc, argv);

  // Appended last so it wins over a conflicting --override.
  if (virtual_in_loss) overrides.emplace_back("train.virtual_in_loss=true");

  try {
    if (*run) return cmd_run(config, out, seeds, overrides, jobs);
    if (*gran) return cmd_granularity(config, values, out, overrides, jobs);
    if (*diag) return cmd_diagnose(graph, probs, out, windows);
    if (*gen) return cmd_generate_sbm(blocks, p_intra, p_inter, dim, shift, sigma, sbm_seed, out);
  } catch (const std::exception& e) {
    std::cerr << "toba: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
