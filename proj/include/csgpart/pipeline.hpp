#pragma once

// End-to-end extraction: overlap graph -> cliques -> partitions -> one GA per
// partition -> merge. Baseline modes skip partitioning and run a single GA.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "csgpart/evolution.hpp"
#include "csgpart/overlap_graph.hpp"

namespace csgpart {

enum class ExecutionMode { BST, BMTGA, SST, SMTP, SMTGA, SMTPGA };

const char* to_string(ExecutionMode mode);
/// Case-insensitive; throws InputError for unknown names.
ExecutionMode parse_mode(const std::string& name);
std::vector<ExecutionMode> all_modes();

bool partitions_search(ExecutionMode mode);
bool parallel_fitness(ExecutionMode mode);
bool parallel_partitions(ExecutionMode mode);

struct ModelInput {
  std::vector<Primitive> primitives;
  PointCloud cloud;
};

/// Scales and shifts primitives and points so the union of the primitive
/// boxes fits in [-1, 1]^3. Inputs already inside that cube are left alone.
/// Returns the applied scale.
double normalize_model(ModelInput& model);

struct ExtractOptions {
  double overlap_margin = kDefaultOverlapMargin;
  std::size_t workers = 0;   // 0: hardware concurrency
};

struct PartitionRun {
  std::vector<int> primitives;
  std::size_t point_count = 0;
  std::uint64_t seed = 0;
  double ga_ms = 0.0;
  double best_score = 0.0;
  std::string tree;
  std::vector<TraceRow> trace;
};

struct StageTimes {
  double graph_ms = 0.0;
  double partition_ms = 0.0;
  double ga_ms = 0.0;
  double merge_ms = 0.0;
  double total_ms = 0.0;

  double overhead_ms() const { return graph_ms + partition_ms + merge_ms; }
};

struct RunReport {
  ExecutionMode mode = ExecutionMode::BST;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  StageTimes times;
  CsgTree tree = CsgTree::leaf(0);
  std::size_t tree_size = 0;
  int tree_depth = 0;
  std::size_t edge_count = 0;
  std::vector<std::size_t> histogram;
  std::vector<PartitionRun> partitions;
};

/// Deterministic for fixed inputs, params and seed in every mode; partition i
/// runs with derive_seed(seed, i).
RunReport extract(const ModelInput& model, const GaParams& params, ExecutionMode mode,
                  std::uint64_t seed, const ExtractOptions& options = {});

/// (points_high / points_low) / (duration_high / duration_low); 1 is linear.
double scaling_ratio(double points_low, double points_high, double duration_low,
                     double duration_high);

nlohmann::json to_json(const RunReport& report, bool include_traces = true);
void write_trace_csv(std::ostream& out, const RunReport& report);

}  // namespace csgpart
