#include "csgpart/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ostream>

#include "csgpart/errors.hpp"
#include "csgpart/merge.hpp"

namespace csgpart {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

const char* to_string(ExecutionMode mode) {
  switch (mode) {
    case ExecutionMode::BST: return "BST";
    case ExecutionMode::BMTGA: return "BMTGA";
    case ExecutionMode::SST: return "SST";
    case ExecutionMode::SMTP: return "SMTP";
    case ExecutionMode::SMTGA: return "SMTGA";
    case ExecutionMode::SMTPGA: return "SMTPGA";
  }
  return "?";
}

std::vector<ExecutionMode> all_modes() {
  return {ExecutionMode::BST,  ExecutionMode::BMTGA, ExecutionMode::SST,
          ExecutionMode::SMTP, ExecutionMode::SMTGA, ExecutionMode::SMTPGA};
}

ExecutionMode parse_mode(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (ExecutionMode m : all_modes()) {
    if (upper == to_string(m)) return m;
  }
  throw InputError("unknown execution mode '" + name + "'");
}

bool partitions_search(ExecutionMode mode) {
  return mode != ExecutionMode::BST && mode != ExecutionMode::BMTGA;
}

bool parallel_fitness(ExecutionMode mode) {
  return mode == ExecutionMode::BMTGA || mode == ExecutionMode::SMTGA ||
         mode == ExecutionMode::SMTPGA;
}

bool parallel_partitions(ExecutionMode mode) {
  return mode == ExecutionMode::SMTP || mode == ExecutionMode::SMTPGA;
}

double normalize_model(ModelInput& model) {
  const Aabb box = model_aabb(model.primitives);
  if ((box.min.array() >= -1.0).all() && (box.max.array() <= 1.0).all()) return 1.0;
  const Vec3 center = 0.5 * (box.min + box.max);
  const double half = 0.5 * box.extent().maxCoeff();
  const double scale = 1.0 / half;
  const Vec3 offset = -scale * center;
  for (auto& p : model.primitives) p = transformed(p, scale, offset);
  for (auto& s : model.cloud) s.position = scale * s.position + offset;
  return scale;
}

RunReport extract(const ModelInput& model, const GaParams& params, ExecutionMode mode,
                  std::uint64_t seed, const ExtractOptions& options) {
  const auto total_start = Clock::now();
  validate_primitive_set(model.primitives);
  params.validate();
  if (model.cloud.empty()) throw InputError("extract: empty point cloud");

  RunReport report;
  report.mode = mode;
  report.seed = seed;

  std::optional<WorkerPool> pool;
  if (parallel_fitness(mode) || parallel_partitions(mode)) pool.emplace(options.workers);
  report.workers = pool ? pool->workers() : 1;

  std::vector<Partition> partitions;
  if (partitions_search(mode)) {
    auto start = Clock::now();
    const PoGraph graph = build_po_graph(model.primitives, options.overlap_margin);
    report.times.graph_ms = ms_since(start);
    report.edge_count = graph.edge_count();

    start = Clock::now();
    partitions = make_partitions(maximal_cliques(graph), model.cloud, model.primitives.size());
    report.times.partition_ms = ms_since(start);
  } else {
    std::vector<int> all(model.primitives.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    partitions = make_partitions({all}, model.cloud, model.primitives.size());
  }
  report.histogram = partition_histogram(partitions);

  report.partitions.resize(partitions.size());
  std::vector<std::optional<CsgTree>> trees(partitions.size());
  const WorkerPool* fitness_pool = parallel_fitness(mode) ? &*pool : nullptr;
  auto run_partition = [&](std::size_t i) {
    const auto start = Clock::now();
    GaParams local = params;
    local.seed = derive_seed(seed, i);
    EvolveResult result = evolve(partitions[i], model.primitives, model.cloud, local, fitness_pool);
    PartitionRun& run = report.partitions[i];
    run.primitives = partitions[i].primitives;
    run.point_count = partitions[i].points.size();
    run.seed = local.seed;
    run.best_score = result.best.score;
    run.tree = serialize(result.best.tree);
    run.trace = std::move(result.trace);
    trees[i] = std::move(result.best.tree);
    run.ga_ms = ms_since(start);
  };
  const auto ga_start = Clock::now();
  if (parallel_partitions(mode)) {
    pool->parallel_for(partitions.size(), run_partition);
  } else {
    for (std::size_t i = 0; i < partitions.size(); ++i) run_partition(i);
  }
  report.times.ga_ms = ms_since(ga_start);

  if (partitions_search(mode)) {
    const auto start = Clock::now();
    std::vector<CsgTree> list;
    list.reserve(trees.size());
    for (auto& t : trees) list.push_back(std::move(*t));
    CsgTree merged = merge_all(std::move(list));
    if (auto simplified = simplify(merged)) merged = std::move(*simplified);
    report.tree = std::move(merged);
    report.times.merge_ms = ms_since(start);
  } else {
    report.tree = std::move(*trees.front());
  }
  report.tree_size = report.tree.size();
  report.tree_depth = report.tree.depth();
  report.times.total_ms = ms_since(total_start);
  return report;
}

double scaling_ratio(double points_low, double points_high, double duration_low,
                     double duration_high) {
  if (!(points_low > 0.0) || !(points_high > 0.0) || !(duration_low > 0.0) ||
      !(duration_high > 0.0)) {
    throw ContractViolation("scaling_ratio: all inputs must be positive");
  }
  return (points_high / points_low) / (duration_high / duration_low);
}

nlohmann::json to_json(const RunReport& report, bool include_traces) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : report.partitions) {
    nlohmann::json entry = {
        {"primitives", p.primitives}, {"points", p.point_count},  {"seed", p.seed},
        {"ga_ms", p.ga_ms},           {"best_score", p.best_score}, {"tree", p.tree},
        {"iterations", p.trace.size()},
    };
    if (include_traces) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : p.trace) rows.push_back({r.iteration, r.best_score, r.mean_score, r.best_size});
      entry["trace"] = std::move(rows);
    }
    parts.push_back(std::move(entry));
  }
  return {
      {"mode", to_string(report.mode)},
      {"seed", report.seed},
      {"workers", report.workers},
      {"times_ms",
       {{"graph", report.times.graph_ms},
        {"partition", report.times.partition_ms},
        {"ga", report.times.ga_ms},
        {"merge", report.times.merge_ms},
        {"total", report.times.total_ms}}},
      {"tree", serialize(report.tree)},
      {"tree_size", report.tree_size},
      {"tree_depth", report.tree_depth},
      {"edges", report.edge_count},
      {"histogram", report.histogram},
      {"partitions", std::move(parts)},
  };
}

void write_trace_csv(std::ostream& out, const RunReport& report) {
  out << "partition,iteration,best_score,mean_score,best_size\n";
  for (std::size_t i = 0; i < report.partitions.size(); ++i) {
    write_trace_csv(out, report.partitions[i].trace, static_cast<int>(i));
  }
}

}  // namespace csgpart
