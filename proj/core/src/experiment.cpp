#include "toba/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "toba/graph_io.hpp"

namespace toba {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T read_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + spec + "': expected key=value");
  }
  const std::string key = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("override '" + spec + "': empty key segment");
    if (!node->is_object()) throw ConfigError("override '" + spec + "': " + part + " is not an object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

SbmParams parse_sbm(const json& j, std::uint64_t& seed) {
  const std::string where = "dataset.sbm";
  reject_unknown(j, {"block_sizes", "p_intra", "p_inter", "d", "feature_shift", "noise_sigma",
                     "seed"},
                 where);
  SbmParams p;
  if (!j.contains("block_sizes")) throw ConfigError(where + ": missing block_sizes");
  p.block_sizes = read_or<std::vector<std::size_t>>(j, "block_sizes", {}, where);
  p.p_intra = read_or(j, "p_intra", 0.0, where);
  p.p_inter = read_or(j, "p_inter", 0.0, where);
  p.feature_dim = read_or<std::size_t>(j, "d", 16, where);
  p.feature_shift = read_or(j, "feature_shift", 1.0, where);
  p.noise_sigma = read_or(j, "noise_sigma", 1.0, where);
  seed = read_or<std::uint64_t>(j, "seed", 0, where);
  try {
    p.validate();
  } catch (const GraphError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

ExperimentConfig parse_single(const json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc, {"name", "dataset", "imbalance", "method", "train", "seeds"}, "config");
  ExperimentConfig cfg;
  cfg.name = read_or<std::string>(doc, "name", "experiment", "config");

  if (!doc.contains("dataset")) throw ConfigError("config: missing dataset");
  const json& ds = doc.at("dataset");
  reject_unknown(ds, {"name", "path", "sbm"}, "dataset");
  if (ds.contains("path") == ds.contains("sbm")) {
    throw ConfigError("dataset: exactly one of 'path' or 'sbm' is required");
  }
  if (ds.contains("path")) {
    std::filesystem::path p = read_or<std::string>(ds, "path", "", "dataset");
    cfg.dataset.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  } else {
    cfg.dataset.sbm = parse_sbm(ds.at("sbm"), cfg.dataset.sbm_seed);
  }
  cfg.dataset.name = read_or<std::string>(
      ds, "name", ds.contains("path") ? cfg.dataset.path.stem().string() : "sbm", "dataset");

  if (doc.contains("imbalance")) {
    const json& im = doc.at("imbalance");
    reject_unknown(im, {"kind", "ir", "base_per_class", "val_per_class"}, "imbalance");
    const auto kind = read_or<std::string>(im, "kind", "step", "imbalance");
    if (kind == "step") {
      cfg.imbalance.kind = ImbalanceKind::kStep;
    } else if (kind == "natural") {
      cfg.imbalance.kind = ImbalanceKind::kNatural;
    } else if (kind == "stored") {
      cfg.imbalance.kind = ImbalanceKind::kStored;
    } else {
      throw ConfigError("imbalance.kind: expected step, natural, or stored; got '" + kind + "'");
    }
    cfg.imbalance.ir = read_or(im, "ir", cfg.imbalance.ir, "imbalance");
    cfg.imbalance.base_per_class =
        read_or(im, "base_per_class", cfg.imbalance.base_per_class, "imbalance");
    cfg.imbalance.val_per_class =
        read_or(im, "val_per_class", cfg.imbalance.val_per_class, "imbalance");
  }

  try {
    cfg.train.method = Method::parse(read_or<std::string>(doc, "method", "vanilla", "config"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("method: ") + e.what());
  }

  if (doc.contains("train")) {
    const json& t = doc.at("train");
    reject_unknown(t, {"hidden", "lr", "epochs", "weight_decay", "dropout", "patience",
                       "lr_factor", "granularity", "smote_k", "virtual_in_loss"},
                   "train");
    auto& tc = cfg.train;
    tc.hidden = read_or(t, "hidden", tc.hidden, "train");
    tc.lr = read_or(t, "lr", tc.lr, "train");
    tc.epochs = read_or(t, "epochs", tc.epochs, "train");
    tc.weight_decay = read_or(t, "weight_decay", tc.weight_decay, "train");
    tc.dropout = read_or(t, "dropout", tc.dropout, "train");
    tc.patience = read_or(t, "patience", tc.patience, "train");
    tc.lr_factor = read_or(t, "lr_factor", tc.lr_factor, "train");
    tc.granularity = read_or(t, "granularity", tc.granularity, "train");
    tc.smote_k = read_or(t, "smote_k", tc.smote_k, "train");
    tc.virtual_in_loss = read_or(t, "virtual_in_loss", tc.virtual_in_loss, "train");
  }

  if (doc.contains("seeds")) {
    const json& s = doc.at("seeds");
    if (s.is_number_unsigned()) {
      for (std::uint64_t k = 0; k < s.get<std::uint64_t>(); ++k) cfg.seeds.push_back(k);
    } else {
      cfg.seeds = read_or<std::vector<std::uint64_t>>(doc, "seeds", {}, "config");
    }
  } else {
    cfg.seeds = {0};
  }
  cfg.source_json = doc.dump();
  cfg.validate();
  return cfg;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

constexpr const char* kCsvHeader =
    "dataset,method,ir,seed,bacc,macro_f1,disparity,runtime_ms,virtual_edge_ratio,epochs_run";

}  // namespace

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("config: at least one seed is required");
  if (name.find(',') != std::string::npos || dataset.name.find(',') != std::string::npos) {
    throw ConfigError("config: names may not contain commas");
  }
  if (!(imbalance.ir >= 1.0)) throw ConfigError("imbalance.ir must be >= 1");
  try {
    train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<ExperimentConfig> parse_experiment_grid(const std::string& json_text,
                                                    const std::vector<std::string>& overrides,
                                                    const std::filesystem::path& base_dir) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config: not valid JSON");
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& o : overrides) apply_override(doc, o);

  std::vector<json> methods;
  if (doc.contains("method") && doc.at("method").is_array()) {
    for (const auto& m : doc.at("method")) methods.push_back(m);
    if (methods.empty()) throw ConfigError("config: method list is empty");
  } else {
    methods.push_back(doc.value("method", json("vanilla")));
  }
  std::vector<json> irs;
  if (doc.contains("imbalance") && doc.at("imbalance").contains("ir") &&
      doc.at("imbalance").at("ir").is_array()) {
    for (const auto& ir : doc.at("imbalance").at("ir")) irs.push_back(ir);
    if (irs.empty()) throw ConfigError("config: ir list is empty");
  } else {
    irs.push_back(json());
  }

  std::vector<ExperimentConfig> out;
  for (const auto& ir : irs) {
    for (const auto& method : methods) {
      json cell = doc;
      cell["method"] = method;
      if (!ir.is_null()) cell["imbalance"]["ir"] = ir;
      out.push_back(parse_single(cell, base_dir));
    }
  }
  return out;
}

std::vector<ExperimentConfig> load_experiment_grid(const std::filesystem::path& path,
                                                   const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_experiment_grid(ss.str(), overrides, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

GraphDocument load_dataset(const DatasetSpec& spec) {
  if (spec.sbm) return GraphDocument{generate_sbm(*spec.sbm, spec.sbm_seed), std::nullopt};
  return load_graph_document(spec.path);
}

Split build_split(const GraphDocument& doc, const ImbalanceSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case ImbalanceKind::kStep:
      return make_step_imbalance_split(doc.graph, spec.base_per_class, spec.ir, seed,
                                       spec.val_per_class);
    case ImbalanceKind::kNatural:
      return make_natural_imbalance_split(doc.graph, spec.ir, seed, spec.val_per_class);
    case ImbalanceKind::kStored:
      if (!doc.split) throw ConfigError("imbalance.kind=stored but the graph file has no split");
      return Split::from_indices(doc.graph, doc.split->train, doc.split->val, doc.split->test);
  }
  throw ConfigError("unreachable imbalance kind");
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (const double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

SeedRun run_seed(const ExperimentConfig& cfg, const GraphDocument& graph, std::uint64_t seed) {
  SeedRun run;
  run.seed = seed;
  run.split = build_split(graph, cfg.imbalance, seed);
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  run.result = train(graph.graph, run.split, tc);
  const auto& mr = run.result.metrics;
  run.row = ResultRow{cfg.dataset.name,   tc.method.name(), cfg.imbalance.ir,
                      seed,               mr.bacc,          mr.macro_f1,
                      mr.disparity,       mr.runtime_ms,    mr.virtual_edge_ratio,
                      run.result.history.size()};
  return run;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const GraphDocument& graph,
                                std::vector<SeedRun>* runs, std::size_t jobs) {
  cfg.validate();
  std::vector<SeedRun> local(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t k = next++; k < cfg.seeds.size(); k = next++) {
      try {
        local[k] = run_seed(cfg, graph, cfg.seeds[k]);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, cfg.seeds.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult res;
  res.config = cfg;
  std::vector<double> bacc, f1, disp, rt, ratio;
  for (const auto& r : local) {
    res.rows.push_back(r.row);
    bacc.push_back(r.row.bacc);
    f1.push_back(r.row.macro_f1);
    disp.push_back(r.row.disparity);
    rt.push_back(r.row.runtime_ms);
    ratio.push_back(r.row.virtual_edge_ratio);
  }
  res.bacc = summarize(bacc);
  res.macro_f1 = summarize(f1);
  res.disparity = summarize(disp);
  res.runtime_ms = summarize(rt);
  res.virtual_edge_ratio = summarize(ratio);
  if (runs != nullptr) *runs = std::move(local);
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  const GraphDocument graph = load_dataset(cfg.dataset);
  return run_experiment(cfg, graph, nullptr, jobs);
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.dataset << ',' << r.method << ',' << format_double(r.ir) << ',' << r.seed << ','
       << format_double(r.bacc) << ',' << format_double(r.macro_f1) << ','
       << format_double(r.disparity) << ',' << format_double(r.runtime_ms) << ','
       << format_double(r.virtual_edge_ratio) << ',' << r.epochs_run << '\n';
  }
}

std::vector<ResultRow> parse_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw ConfigError("results csv: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 10) {
      throw ConfigError("results csv line " + std::to_string(lineno) + ": expected 10 columns");
    }
    try {
      ResultRow r;
      r.dataset = cells[0];
      r.method = cells[1];
      r.ir = std::stod(cells[2]);
      r.seed = std::stoull(cells[3]);
      r.bacc = std::stod(cells[4]);
      r.macro_f1 = std::stod(cells[5]);
      r.disparity = std::stod(cells[6]);
      r.runtime_ms = std::stod(cells[7]);
      r.virtual_edge_ratio = std::stod(cells[8]);
      r.epochs_run = std::stoull(cells[9]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ConfigError("results csv line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

std::string summary_json(const std::vector<ExperimentResult>& results) {
  json out = json::array();
  for (const auto& r : results) {
    const auto metric = [](const MetricSummary& s) { return json{{"mean", s.mean}, {"std", s.std}}; };
    out.push_back({
        {"name", r.config.name},
        {"dataset", r.config.dataset.name},
        {"method", r.config.train.method.name()},
        {"ir", r.config.imbalance.ir},
        {"seeds", r.config.seeds},
        {"bacc", metric(r.bacc)},
        {"macro_f1", metric(r.macro_f1)},
        {"disparity", metric(r.disparity)},
        {"runtime_ms", metric(r.runtime_ms)},
        {"virtual_edge_ratio", metric(r.virtual_edge_ratio)},
        {"config", json::parse(r.config.source_json)},
    });
  }
  return out.dump(2) + "\n";
}

std::vector<GranularityRow> compare_granularity(const ExperimentConfig& cfg,
                                                const std::vector<std::size_t>& granularities,
                                                std::size_t jobs) {
  if (!cfg.train.method.uses_toba()) {
    throw ConfigError("granularity comparison requires a ToBA method");
  }
  const GraphDocument graph = load_dataset(cfg.dataset);
  std::vector<GranularityRow> out;
  for (const std::size_t gran : granularities) {
    ExperimentConfig c = cfg;
    c.train.granularity = gran;
    std::vector<SeedRun> runs;
    const auto res = run_experiment(c, graph, &runs, jobs);
    GranularityRow row;
    row.granularity = gran;
    row.bacc = res.bacc;
    row.macro_f1 = res.macro_f1;
    row.invocations = runs.front().result.augment_invocations;
    double ms = 0.0;
    for (const auto& r : runs) ms += r.result.augment_ms;
    row.augment_ms_per_run = ms / static_cast<double>(runs.size());
    row.augment_ms_per_iteration = row.augment_ms_per_run / static_cast<double>(c.train.epochs);
    out.push_back(row);
  }
  return out;
}

void write_granularity_csv(std::ostream& os, const std::vector<GranularityRow>& rows) {
  os << "granularity,bacc_mean,bacc_std,macro_f1_mean,macro_f1_std,invocations,"
        "augment_ms_per_run,augment_ms_per_iteration\n";
  for (const auto& r : rows) {
    os << r.granularity << ',' << format_double(r.bacc.mean) << ',' << format_double(r.bacc.std)
       << ',' << format_double(r.macro_f1.mean) << ',' << format_double(r.macro_f1.std) << ','
       << r.invocations << ',' << format_double(r.augment_ms_per_run) << ','
       << format_double(r.augment_ms_per_iteration) << '\n';
  }
}

}  // namespace toba
