// Command-line front end: sampling, extraction, benchmarks and tree utilities.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "csgpart/bench.hpp"
#include "csgpart/errors.hpp"
#include "csgpart/model_io.hpp"
#include "csgpart/pipeline.hpp"
#include "csgpart/sampling.hpp"

using namespace csgpart;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

// Writes to `path`, or to stdout when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out = open_out(path);
  write(out);
}

void add_ga_flags(CLI::App* cmd, GaParams& ga, double& alpha) {
  cmd->add_option("--n-t,--population", ga.population_size, "population size n_T")->capture_default_str();
  cmd->add_option("--n-b,--elite", ga.elite_count, "elite count n_b")->capture_default_str();
  cmd->add_option("--gamma-cr,--crossover", ga.crossover_probability, "crossover probability")
      ->capture_default_str();
  cmd->add_option("--gamma-mu,--mutation", ga.mutation_probability, "mutation probability")
      ->capture_default_str();
  cmd->add_option("--mu-mu,--subtree", ga.subtree_probability, "subtree replacement probability mu_mu")
      ->capture_default_str();
  cmd->add_option("--k-ts,--tournament", ga.tournament_size, "tournament size")->capture_default_str();
  cmd->add_option("--alpha", alpha, "size weight (default ln(#points) of the partition)");
  cmd->add_option("--beta", ga.distance_weight, "distance weight")->capture_default_str();
  cmd->add_option("--gamma", ga.angle_weight, "angle weight")->capture_default_str();
  cmd->add_option("--n-tc,--stagnation", ga.stagnation_window, "iterations without improvement before stopping")
      ->capture_default_str();
  cmd->add_option("--max-iterations", ga.max_iterations, "hard iteration cap")->capture_default_str();
}

void write_sign_grid(std::ostream& out, const CsgTree& tree, std::span<const Primitive> prims, const Aabb& box,
                     int n) {
  out << "grid " << n << ' ' << box.min.x() << ' ' << box.min.y() << ' ' << box.min.z() << ' ' << box.max.x()
      << ' ' << box.max.y() << ' ' << box.max.z() << '\n';
  const Vec3 step = box.extent() / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::string line(static_cast<std::size_t>(n), '0');
      for (int k = 0; k < n; ++k) {
        const Vec3 x = box.min + Vec3((i + 0.5) * step.x(), (j + 0.5) * step.y(), (k + 0.5) * step.z());
        if (eval_tree(tree, x, prims) >= 0.0) line[static_cast<std::size_t>(k)] = '1';
      }
      out << line << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CSG tree extraction from segmented point clouds"};
  app.require_subcommand(1);

  // sample
  std::string model_name;
  std::size_t points = 10000;
  double sigma = 0.01;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string prims_out;
  std::string tree_out;
  auto* sample = app.add_subcommand("sample", "sample a builtin model into a labeled point cloud");
  sample->add_option("model", model_name, "builtin model name (see `models`)")->required();
  sample->add_option("--points", points, "number of samples")->capture_default_str();
  sample->add_option("--sigma", sigma, "std of the Gaussian position noise")->capture_default_str();
  sample->add_option("--seed", seed, "random seed")->capture_default_str();
  sample->add_option("-o,--output", out_path, "point cloud file")->required();
  sample->add_option("--prims", prims_out, "also write the model primitives (JSON)");
  sample->add_option("--tree-out", tree_out, "also write the ground-truth tree");

  // extract
  std::string cloud_path;
  std::string prims_path;
  std::string mode_name = "sst";
  GaParams ga;
  double alpha = -1.0;
  std::size_t workers = 0;
  double margin = kDefaultOverlapMargin;
  std::string trace_path;
  std::string graph_path;
  bool no_normalize = false;
  auto* ext = app.add_subcommand("extract", "reconstruct a CSG tree from a cloud and its primitives");
  ext->add_option("--cloud", cloud_path, "point cloud file")->required()->check(CLI::ExistingFile);
  ext->add_option("--prims", prims_path, "primitive file (JSON)")->required()->check(CLI::ExistingFile);
  ext->add_option("--mode", mode_name, "bst, bmtga, sst, smtp, smtga or smtpga")->capture_default_str();
  ext->add_option("--seed", seed, "master seed")->capture_default_str();
  add_ga_flags(ext, ga, alpha);
  ext->add_option("--workers", workers, "worker threads for parallel modes (0: hardware)")->capture_default_str();
  ext->add_option("--margin", margin, "AABB overlap margin")->capture_default_str();
  ext->add_option("--trace", trace_path, "per-generation trace CSV");
  ext->add_option("--graph", graph_path, "overlap graph edge list");
  ext->add_flag("--no-normalize", no_normalize, "skip rescaling into [-1, 1]^3");
  ext->add_option("-o,--output", out_path, "report file (JSON, default stdout)");

  // bench
  std::string config_path;
  std::string plot_path;
  auto* bench = app.add_subcommand("bench", "timed repeated runs over execution modes");
  bench->add_option("--config", config_path, "bench config (JSON)")->required()->check(CLI::ExistingFile);
  bench->add_option("-o,--output", out_path, "results CSV (default stdout)");
  bench->add_option("--plot-data", plot_path, "also write the results as JSON");

  // simplify
  std::string tree_path;
  auto* simp = app.add_subcommand("simplify", "remove redundant structure from a tree");
  simp->add_option("--tree", tree_path, "tree file")->required()->check(CLI::ExistingFile);

  // eval
  int grid = 64;
  std::string against_path;
  auto* ev = app.add_subcommand("eval", "export the inside/outside grid of a tree");
  ev->add_option("--tree", tree_path, "tree file")->required()->check(CLI::ExistingFile);
  ev->add_option("--prims", prims_path, "primitive file (JSON)")->required()->check(CLI::ExistingFile);
  ev->add_option("--grid", grid, "cells per axis")->capture_default_str()->check(CLI::PositiveNumber);
  ev->add_option("--against", against_path, "second tree; prints the sign agreement")->check(CLI::ExistingFile);
  ev->add_option("-o,--output", out_path, "sign grid file (default stdout)");

  auto* models = app.add_subcommand("models", "list the builtin models");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      const GroundTruthModel model = builtin_model(model_name);
      if (points < 1) throw InputError("--points must be at least 1");
      if (!(sigma >= 0.0)) throw InputError("--sigma must be non-negative");
      Rng rng(seed);
      save_point_cloud(out_path, sample_model(model, points, sigma, rng));
      if (!prims_out.empty()) save_primitives(prims_out, model.primitives);
      if (!tree_out.empty()) save_tree(tree_out, model.tree);
    } else if (*ext) {
      ModelInput input{load_primitives(prims_path), load_point_cloud(cloud_path)};
      const double scale = no_normalize ? 1.0 : normalize_model(input);
      if (alpha >= 0.0) ga.size_weight = alpha;
      try {
        ga.validate();
      } catch (const ContractViolation& e) {
        throw InputError(e.what());
      }
      ExtractOptions options;
      options.workers = workers;
      options.overlap_margin = margin;
      const ExecutionMode mode = parse_mode(mode_name);
      const RunReport report = extract(input, ga, mode, seed, options);
      nlohmann::json doc = to_json(report, false);
      doc["scale"] = scale;
      emit(out_path, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
      if (!trace_path.empty()) {
        auto out = open_out(trace_path);
        write_trace_csv(out, report);
      }
      if (!graph_path.empty()) {
        auto out = open_out(graph_path);
        write_edge_list(out, build_po_graph(input.primitives, margin));
      }
    } else if (*bench) {
      const BenchReport report = run_bench(load_bench_config(config_path));
      emit(out_path, [&](std::ostream& o) { write_bench_csv(o, report); });
      if (!plot_path.empty()) {
        auto out = open_out(plot_path);
        out << bench_plot_data(report).dump(2) << '\n';
      }
    } else if (*simp) {
      const auto result = simplify(load_tree(tree_path));
      if (!result) {
        std::cout << "empty\n";
        return 0;
      }
      std::cout << serialize(*result) << '\n';
    } else if (*ev) {
      const auto prims = load_primitives(prims_path);
      const CsgTree tree = load_tree(tree_path);
      const Aabb box = model_aabb(prims).expanded(0.05);
      if (!against_path.empty()) {
        std::cerr << "sign agreement: " << sign_agreement(tree, load_tree(against_path), prims, box, grid)
                  << '\n';
      }
      emit(out_path, [&](std::ostream& o) { write_sign_grid(o, tree, prims, box, grid); });
    } else if (*models) {
      for (const auto& m : builtin_models()) {
        std::cout << m.name << "  primitives=" << m.primitives.size() << "  tree=" << serialize(m.tree) << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "csgpart: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
