#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toba/graph.hpp"
#include "toba/split.hpp"
#include "toba/trainer.hpp"

namespace toba {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  std::string name;
  std::filesystem::path path;  // graph file; empty when sbm is set
  std::optional<SbmParams> sbm;
  std::uint64_t sbm_seed = 0;
};

enum class ImbalanceKind { kStep, kNatural, kStored };

struct ImbalanceSpec {
  ImbalanceKind kind = ImbalanceKind::kStep;
  double ir = 10.0;
  std::size_t base_per_class = 20;
  std::size_t val_per_class = kDefaultValPerClass;
};

/// One (dataset, imbalance, method) cell evaluated over a list of seeds.
struct ExperimentConfig {
  std::string name;
  DatasetSpec dataset;
  ImbalanceSpec imbalance;
  TrainConfig train;
  std::vector<std::uint64_t> seeds;
  /// The JSON document this cell came from, for provenance in summaries.
  std::string source_json;

  void validate() const;
};

/// Parses a JSON experiment document. "method" and "imbalance.ir" may be
/// arrays, in which case one ExperimentConfig per combination is returned.
/// Each override is "dotted.key=value"; the value is parsed as JSON when
/// possible and taken as a string otherwise. Relative dataset paths resolve
/// against `base_dir`.
std::vector<ExperimentConfig> parse_experiment_grid(const std::string& json_text,
                                                    const std::vector<std::string>& overrides = {},
                                                    const std::filesystem::path& base_dir = {});
std::vector<ExperimentConfig> load_experiment_grid(const std::filesystem::path& path,
                                                   const std::vector<std::string>& overrides = {});

/// Loads or generates the dataset graph. Also returns a stored split when
/// the graph file carries one.
GraphDocument load_dataset(const DatasetSpec& spec);

/// The training split for one seed.
Split build_split(const GraphDocument& doc, const ImbalanceSpec& spec, std::uint64_t seed);

struct ResultRow {
  std::string dataset;
  std::string method;
  double ir = 0.0;
  std::uint64_t seed = 0;
  double bacc = 0.0;
  double macro_f1 = 0.0;
  double disparity = 0.0;
  double runtime_ms = 0.0;
  double virtual_edge_ratio = 0.0;
  std::size_t epochs_run = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over seeds
};
MetricSummary summarize(const std::vector<double>& values);

/// Everything produced by one seed, for callers that need more than a row.
struct SeedRun {
  std::uint64_t seed = 0;
  Split split;
  TrainResult result;
  ResultRow row;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;  // in the order of config.seeds
  MetricSummary bacc, macro_f1, disparity, runtime_ms, virtual_edge_ratio;
};

/// Trains one seed. `graph` must come from load_dataset(cfg.dataset).
SeedRun run_seed(const ExperimentConfig& cfg, const GraphDocument& graph, std::uint64_t seed);

/// Runs every seed (on up to `jobs` threads) and aggregates mean and std.
/// Each seed's result depends only on the config and that seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);
/// Same, but also hands back every SeedRun.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const GraphDocument& graph,
                                std::vector<SeedRun>* runs, std::size_t jobs = 1);

/// CSV with the ResultRow columns, in declaration order. Doubles are written
/// with 17 significant digits so parsing restores them exactly.
void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(std::istream& is);

/// JSON summary: config echo plus mean/std per metric for each experiment.
std::string summary_json(const std::vector<ExperimentResult>& results);

struct GranularityRow {
  std::size_t granularity = 1;
  MetricSummary bacc;
  MetricSummary macro_f1;
  std::size_t invocations = 0;        // augmentations per run
  double augment_ms_per_run = 0.0;    // mean over seeds
  double augment_ms_per_iteration = 0.0;
};

/// Reruns a ToBA experiment once per granularity value.
std::vector<GranularityRow> compare_granularity(const ExperimentConfig& cfg,
                                                const std::vector<std::size_t>& granularities,
                                                std::size_t jobs = 1);
void write_granularity_csv(std::ostream& os, const std::vector<GranularityRow>& rows);

}  // namespace toba
