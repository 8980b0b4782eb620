#include "csgpart/bench.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "csgpart/errors.hpp"
#include "csgpart/sampling.hpp"

namespace csgpart {

namespace {

using nlohmann::json;

template <class T>
void read_key(const json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("bench config: key '") + key + "' has the wrong type");
  }
}

GaParams ga_from_json(const json& j, GaParams ga) {
  if (!j.is_object()) throw InputError("bench config: 'ga' must be an object");
  read_key(j, "population_size", ga.population_size);
  read_key(j, "elite_count", ga.elite_count);
  read_key(j, "crossover_probability", ga.crossover_probability);
  read_key(j, "mutation_probability", ga.mutation_probability);
  read_key(j, "subtree_probability", ga.subtree_probability);
  read_key(j, "tournament_size", ga.tournament_size);
  read_key(j, "distance_weight", ga.distance_weight);
  read_key(j, "angle_weight", ga.angle_weight);
  read_key(j, "stagnation_window", ga.stagnation_window);
  read_key(j, "max_iterations", ga.max_iterations);
  if (j.contains("size_weight")) {
    double alpha = 0.0;
    read_key(j, "size_weight", alpha);
    ga.size_weight = alpha;
  }
  return ga;
}

Summary stage(const std::vector<RunReport>& runs, double StageTimes::*field) {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const auto& r : runs) v.push_back(r.times.*field);
  return summarize(v);
}

json summary_json(const Summary& s) { return {{"mean", s.mean}, {"std", s.stddev}}; }

}  // namespace

void BenchConfig::validate() const {
  if (repetitions < 1) throw InputError("bench config: repetitions must be at least 1");
  if (points_low < 1 || points_high < 1) throw InputError("bench config: point counts must be positive");
  if (!(sigma >= 0.0)) throw InputError("bench config: sigma must be non-negative");
  if (modes.empty()) throw InputError("bench config: no modes");
  try {
    ga.validate();
  } catch (const ContractViolation& e) {
    throw InputError(std::string("bench config: ") + e.what());
  }
}

BenchConfig bench_config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("bench config: expected a JSON object");
  BenchConfig c;
  read_key(j, "model", c.model);
  read_key(j, "repetitions", c.repetitions);
  read_key(j, "points_low", c.points_low);
  read_key(j, "points_high", c.points_high);
  read_key(j, "sigma", c.sigma);
  read_key(j, "seed", c.seed);
  read_key(j, "workers", c.workers);
  if (const auto it = j.find("modes"); it != j.end()) {
    std::vector<std::string> names;
    read_key(j, "modes", names);
    c.modes.clear();
    for (const auto& n : names) c.modes.push_back(parse_mode(n));
  }
  if (const auto it = j.find("ga"); it != j.end()) c.ga = ga_from_json(*it, c.ga);
  c.validate();
  return c;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return bench_config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InputError("bench config: " + std::string(e.what()));
  }
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("summarize: no values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

BenchReport run_bench(const BenchConfig& config) {
  config.validate();
  const GroundTruthModel model = builtin_model(config.model);
  const std::size_t levels[2] = {config.points_low, config.points_high};

  std::vector<ModelInput> inputs;
  for (std::size_t level = 0; level < 2; ++level) {
    Rng rng(derive_seed(config.seed, level));
    inputs.push_back({model.primitives, sample_model(model, levels[level], config.sigma, rng)});
  }

  ExtractOptions options;
  options.workers = config.workers;
  BenchReport report;
  report.model = config.model;
  for (ExecutionMode mode : config.modes) {
    for (std::size_t level = 0; level < 2; ++level) {
      std::vector<RunReport> runs;
      for (std::size_t r = 0; r < config.repetitions; ++r) {
        runs.push_back(extract(inputs[level], config.ga, mode, derive_seed(config.seed, 100 + r), options));
      }
      BenchRow row;
      row.mode = mode;
      row.points = inputs[level].cloud.size();
      row.repetitions = runs.size();
      row.graph_ms = stage(runs, &StageTimes::graph_ms);
      row.partition_ms = stage(runs, &StageTimes::partition_ms);
      row.ga_ms = stage(runs, &StageTimes::ga_ms);
      row.merge_ms = stage(runs, &StageTimes::merge_ms);
      row.total_ms = stage(runs, &StageTimes::total_ms);
      for (const auto& run : runs) {
        row.tree_size += static_cast<double>(run.tree_size) / runs.size();
        row.tree_depth += static_cast<double>(run.tree_depth) / runs.size();
      }
      row.histogram = runs.front().histogram;
      report.rows.push_back(std::move(row));
    }
    const BenchRow& low = report.rows[report.rows.size() - 2];
    const BenchRow& high = report.rows.back();
    report.scaling.push_back(scaling_ratio(static_cast<double>(low.points), static_cast<double>(high.points),
                                           low.total_ms.mean, high.total_ms.mean));
  }
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "model,mode,points,repetitions,"
         "graph_ms_mean,graph_ms_std,partition_ms_mean,partition_ms_std,"
         "ga_ms_mean,ga_ms_std,merge_ms_mean,merge_ms_std,total_ms_mean,total_ms_std,"
         "tree_size_mean,tree_depth_mean,scaling_ratio\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const BenchRow& r = report.rows[i];
    out << report.model << ',' << to_string(r.mode) << ',' << r.points << ',' << r.repetitions;
    for (const Summary* s : {&r.graph_ms, &r.partition_ms, &r.ga_ms, &r.merge_ms, &r.total_ms}) {
      out << ',' << s->mean << ',' << s->stddev;
    }
    out << ',' << r.tree_size << ',' << r.tree_depth << ',' << report.scaling[i / 2] << '\n';
  }
}

json bench_plot_data(const BenchReport& report) {
  json rows = json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const BenchRow& r = report.rows[i];
    rows.push_back({
        {"mode", to_string(r.mode)},
        {"points", r.points},
        {"repetitions", r.repetitions},
        {"graph_ms", summary_json(r.graph_ms)},
        {"partition_ms", summary_json(r.partition_ms)},
        {"ga_ms", summary_json(r.ga_ms)},
        {"merge_ms", summary_json(r.merge_ms)},
        {"total_ms", summary_json(r.total_ms)},
        {"tree_size", r.tree_size},
        {"tree_depth", r.tree_depth},
        {"histogram", r.histogram},
        {"scaling_ratio", report.scaling[i / 2]},
    });
  }
  return {{"model", report.model}, {"rows", rows}};
}

}  // namespace csgpart
