#pragma once

// Repeated timed extraction runs over execution modes and two point-count
// levels, summarized as mean and sample standard deviation per stage.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "csgpart/pipeline.hpp"

namespace csgpart {

struct BenchConfig {
  std::string model = "m2-analog";
  std::vector<ExecutionMode> modes = all_modes();
  std::size_t repetitions = 5;
  std::size_t points_low = 10000;
  std::size_t points_high = 100000;
  double sigma = 0.01;
  std::uint64_t seed = 1;
  GaParams ga;
  std::size_t workers = 0;

  /// Throws InputError.
  void validate() const;
};

/// Missing keys keep their defaults. Recognized keys: model, modes,
/// repetitions, points_low, points_high, sigma, seed, workers and a "ga"
/// object with the GaParams field names.
BenchConfig bench_config_from_json(const nlohmann::json& j);
BenchConfig load_bench_config(const std::filesystem::path& path);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;   // sample (n - 1) deviation, 0 for a single value
};

Summary summarize(std::span<const double> values);

struct BenchRow {
  ExecutionMode mode = ExecutionMode::BST;
  std::size_t points = 0;
  std::size_t repetitions = 0;
  Summary graph_ms, partition_ms, ga_ms, merge_ms, total_ms;
  double tree_size = 0.0;
  double tree_depth = 0.0;
  std::vector<std::size_t> histogram;
};

struct BenchReport {
  std::string model;
  std::vector<BenchRow> rows;            // mode-major, low level before high
  std::vector<double> scaling;           // per mode, from mean total times
};

/// The cloud of each level is sampled once with derive_seed(seed, level);
/// repetition r of every mode runs with derive_seed(seed, 100 + r), so modes
/// see the same inputs and seeds.
BenchReport run_bench(const BenchConfig& config);

void write_bench_csv(std::ostream& out, const BenchReport& report);
nlohmann::json bench_plot_data(const BenchReport& report);

}  // namespace csgpart
