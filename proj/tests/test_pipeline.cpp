#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "csgpart/errors.hpp"
#include "csgpart/pipeline.hpp"
#include "csgpart/sampling.hpp"

using namespace csgpart;

namespace {

ModelInput sampled(const std::string& name, std::size_t n, std::uint64_t seed) {
  const GroundTruthModel m = builtin_model(name);
  Rng rng(seed);
  return {m.primitives, sample_model(m, n, 0.01, rng)};
}

GaParams small_ga() {
  GaParams p;
  p.population_size = 40;
  return p;
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_mode("smtpga") == ExecutionMode::SMTPGA);
  CHECK(parse_mode("BsT") == ExecutionMode::BST);
  CHECK(std::string(to_string(ExecutionMode::SMTGA)) == "SMTGA");
  CHECK_THROWS_AS(parse_mode("fast"), InputError);
  CHECK(all_modes().size() == 6);
  CHECK_FALSE(partitions_search(ExecutionMode::BMTGA));
  CHECK(parallel_fitness(ExecutionMode::SMTPGA));
  CHECK_FALSE(parallel_partitions(ExecutionMode::SMTGA));
}

TEST_CASE("scaling ratio") {
  CHECK(scaling_ratio(1, 2, 1, 2) == doctest::Approx(1.0));
  CHECK(scaling_ratio(11.3, 156.4, 3.0, 3.0 * 156.4 / 11.3) == doctest::Approx(1.0));
  CHECK(scaling_ratio(1, 10, 1, 5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(scaling_ratio(0, 10, 1, 5), ContractViolation);
  CHECK_THROWS_AS(scaling_ratio(1, 10, -1, 5), ContractViolation);
}

TEST_CASE("normalization maps the primitive boxes into the unit cube") {
  ModelInput in = sampled("two-prim", 50, 1);
  const ModelInput original = in;
  CHECK(normalize_model(in) == 1.0);
  for (auto& p : in.primitives) p = transformed(p, 10.0, Vec3(3, 0, 0));
  for (auto& s : in.cloud) s.position = 10.0 * s.position + Vec3(3, 0, 0);
  const double scale = normalize_model(in);
  const Aabb box = model_aabb(in.primitives);
  CHECK(box.min.minCoeff() >= -1.0 - 1e-12);
  CHECK(box.max.maxCoeff() <= 1.0 + 1e-12);
  CHECK(box.extent().maxCoeff() == doctest::Approx(2.0));
  CHECK(scale > 0.0);
  const CsgTree t = builtin_model("two-prim").tree;
  for (std::size_t i = 0; i < in.cloud.size(); ++i) {
    const double before = eval_tree(t, original.cloud[i].position, original.primitives);
    CHECK(eval_tree(t, in.cloud[i].position, in.primitives) == doctest::Approx(before * 10.0 * scale).epsilon(1e-9));
  }
}

TEST_CASE("single clique: partitioned and baseline runs agree") {
  const ModelInput in = sampled("two-prim", 800, 2);
  const RunReport s = extract(in, small_ga(), ExecutionMode::SST, 5);
  const RunReport b = extract(in, small_ga(), ExecutionMode::BST, 5);
  CHECK(serialize(s.tree) == serialize(b.tree));
  CHECK(s.histogram == std::vector<std::size_t>{0, 1});
}

TEST_CASE("report contents") {
  const ModelInput in = sampled("m1-analog", 1500, 3);
  const RunReport r = extract(in, small_ga(), ExecutionMode::SST, 9);
  CHECK(r.histogram == std::vector<std::size_t>{0, 0, 2});
  CHECK(r.edge_count == 5);
  REQUIRE(r.partitions.size() == 2);
  CHECK(r.partitions[0].primitives == std::vector<int>{0, 1, 2});
  CHECK(r.partitions[0].seed == derive_seed(9, 0));
  CHECK(r.partitions[1].seed == derive_seed(9, 1));
  CHECK(r.tree_size == r.tree.size());
  CHECK(r.tree_depth == r.tree.depth());
  CHECK(parse(serialize(r.tree)) == r.tree);
  const StageTimes& t = r.times;
  for (double v : {t.graph_ms, t.partition_ms, t.ga_ms, t.merge_ms}) CHECK(v >= 0.0);
  CHECK(t.graph_ms + t.partition_ms + t.ga_ms + t.merge_ms <= t.total_ms + 1e-3);

  const auto j = to_json(r);
  CHECK(j["mode"] == "SST");
  CHECK(j["tree"] == serialize(r.tree));
  CHECK(j["tree_size"] == r.tree_size);
  CHECK(j["partitions"].size() == 2);
  CHECK(j["partitions"][0]["trace"].size() == r.partitions[0].trace.size());
  CHECK_FALSE(to_json(r, false)["partitions"][0].contains("trace"));

  std::ostringstream csv;
  write_trace_csv(csv, r);
  CHECK(csv.str().rfind("partition,iteration,best_score,mean_score,best_size\n0,0,", 0) == 0);
}

TEST_CASE("mode equivalence on m1-analog") {
  const ModelInput in = sampled("m1-analog", 1500, 4);
  ExtractOptions opt;
  opt.workers = 4;
  const std::string sst = serialize(extract(in, small_ga(), ExecutionMode::SST, 21, opt).tree);
  for (ExecutionMode m : {ExecutionMode::SMTP, ExecutionMode::SMTGA, ExecutionMode::SMTPGA}) {
    const RunReport r = extract(in, small_ga(), m, 21, opt);
    CHECK(serialize(r.tree) == sst);
    CHECK(r.workers == 4);
  }
  const std::string bst = serialize(extract(in, small_ga(), ExecutionMode::BST, 21, opt).tree);
  CHECK(serialize(extract(in, small_ga(), ExecutionMode::BMTGA, 21, opt).tree) == bst);
}

TEST_CASE("m2-analog partitions") {
  const ModelInput in = sampled("m2-analog", 2000, 5);
  const RunReport r = extract(in, small_ga(), ExecutionMode::SMTP, 1);
  CHECK(r.histogram == std::vector<std::size_t>{0, 0, 0, 12});
  CHECK(r.tree.leaf_ids().size() == 26);
}

TEST_CASE("extract input errors") {
  ModelInput in = sampled("two-prim", 20, 6);
  ModelInput empty{in.primitives, {}};
  CHECK_THROWS_AS(extract(empty, small_ga(), ExecutionMode::SST, 1), InputError);
  in.cloud[3].label = 7;
  CHECK_THROWS_AS(extract(in, small_ga(), ExecutionMode::SST, 1), InputError);
  GaParams bad = small_ga();
  bad.population_size = 1;
  CHECK_THROWS_AS(extract(sampled("two-prim", 20, 6), bad, ExecutionMode::BST, 1), ContractViolation);

  // Two far-apart primitives with no shared subtree cannot be merged.
  ModelInput apart;
  apart.primitives = {{0, Sphere{0.2}, Pose{Mat3::Identity(), {-0.5, 0, 0}}},
                      {1, Sphere{0.2}, Pose{Mat3::Identity(), {0.5, 0, 0}}}};
  apart.cloud = {{Vec3(-0.3, 0, 0), Vec3(-1, 0, 0), 0}, {Vec3(0.3, 0, 0), Vec3(1, 0, 0), 1}};
  CHECK_THROWS_AS(extract(apart, small_ga(), ExecutionMode::SST, 1), NonMergeableError);
}
