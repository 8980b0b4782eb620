#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "csgpart/errors.hpp"
#include "csgpart/overlap_graph.hpp"
#include "csgpart/random.hpp"
#include "csgpart/sampling.hpp"
#include "oracles.hpp"

using namespace csgpart;

namespace {

using Cliques = std::vector<std::vector<int>>;

Primitive sphere_at(int id, double x) { return {id, Sphere{1.0}, Pose{Mat3::Identity(), Vec3(x, 0, 0)}}; }

PoGraph graph_from(int n, std::initializer_list<std::pair<int, int>> edges) {
  PoGraph g(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) g.add_edge(a, b);
  return g;
}

PointCloud labeled(std::initializer_list<int> labels) {
  PointCloud cloud;
  for (int l : labels) cloud.push_back({Vec3::Zero(), Vec3::UnitX(), l});
  return cloud;
}

}  // namespace

TEST_CASE("graph bookkeeping") {
  PoGraph g(4);
  g.add_edge(2, 0);
  g.add_edge(0, 2);
  g.add_edge(1, 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.adjacent(0, 2));
  CHECK(g.adjacent(2, 0));
  CHECK_FALSE(g.adjacent(0, 1));
  CHECK(g.edges() == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
  CHECK_THROWS_AS(g.add_edge(1, 1), ContractViolation);
  CHECK_THROWS_AS(g.add_edge(0, 4), ContractViolation);
  std::ostringstream out;
  write_edge_list(out, g);
  CHECK(out.str() == "0 2\n1 3\n");
}

TEST_CASE("overlap graph from primitive boxes") {
  const Primitive near[] = {sphere_at(0, 0), sphere_at(1, 1)};
  CHECK(build_po_graph(near).edge_count() == 1);
  const Primitive far[] = {sphere_at(0, 0), sphere_at(1, 3)};
  CHECK(build_po_graph(far).edge_count() == 0);
  // Boxes 2.03 apart: separate without a margin, joined by the default 0.02.
  const Primitive gap[] = {sphere_at(0, 0), sphere_at(1, 2.03)};
  CHECK(build_po_graph(gap, 0.0).edge_count() == 0);
  CHECK(build_po_graph(gap).edge_count() == 1);
}

TEST_CASE("12 clusters of 4 overlapping primitives give 72 edges") {
  std::vector<Primitive> prims;
  for (int c = 0; c < 12; ++c) {
    for (int k = 0; k < 4; ++k) {
      prims.push_back({c * 4 + k, Sphere{0.3}, Pose{Mat3::Identity(), Vec3(c * 2.0, k * 0.1, 0)}});
    }
  }
  const PoGraph g = build_po_graph(prims);
  CHECK(g.edge_count() == 72);
  CHECK(clique_histogram(maximal_cliques(g)) == std::vector<std::size_t>{0, 0, 0, 12});
}

TEST_CASE("maximal cliques on small graphs") {
  CHECK(maximal_cliques(graph_from(3, {{0, 1}, {1, 2}, {0, 2}})) == Cliques{{0, 1, 2}});
  CHECK(maximal_cliques(graph_from(3, {{0, 1}, {1, 2}})) == Cliques{{0, 1}, {1, 2}});
  CHECK(maximal_cliques(graph_from(3, {})) == Cliques{{0}, {1}, {2}});
  CHECK(maximal_cliques(graph_from(5, {{3, 4}, {0, 4}, {0, 3}, {1, 2}})) == Cliques{{0, 3, 4}, {1, 2}});
}

TEST_CASE("maximal cliques agree with subset enumeration") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 10));
    const double density = uniform01(rng);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    PoGraph g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (bernoulli(rng, density)) {
          adj[i][j] = adj[j][i] = true;
          g.add_edge(i, j);
        }
      }
    }
    const Cliques got = maximal_cliques(g);
    const auto want = oracle::maximal_cliques(adj);
    CHECK(std::set<std::vector<int>>(got.begin(), got.end()) == want);
    CHECK(got.size() == want.size());
    CHECK(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("partitions and point assignment") {
  const PointCloud cloud = labeled({0, 1, 2, 1, 0, 2, 2});
  const auto all = make_partitions({{0, 1, 2}}, cloud, 3);
  REQUIRE(all.size() == 1);
  CHECK(all[0].points.size() == cloud.size());

  const auto split = make_partitions({{0, 2}, {1}}, cloud, 3);
  CHECK(split[0].points == std::vector<std::size_t>{0, 2, 4, 5, 6});
  CHECK(split[1].points == std::vector<std::size_t>{1, 3});

  const auto shared = make_partitions({{0, 1}, {1, 2}}, cloud, 3);
  CHECK(shared[0].points == std::vector<std::size_t>{0, 1, 3, 4});
  CHECK(shared[1].points == std::vector<std::size_t>{1, 2, 3, 5, 6});
  std::size_t with_b = 0;
  for (const auto& p : shared) {
    for (auto i : p.points) with_b += cloud[i].label == 1 ? 1 : 0;
  }
  CHECK(with_b == 4);

  CHECK_THROWS_AS(make_partitions({{0, 1}}, labeled({0, 5}), 2), InputError);
  CHECK_THROWS_AS(make_partitions({{0, 1}}, labeled({-1}), 2), InputError);
}

TEST_CASE("histograms") {
  CHECK(clique_histogram({{0}, {1}}) == std::vector<std::size_t>{2});
  CHECK(clique_histogram({{0, 1}, {1, 2}}) == std::vector<std::size_t>{0, 2});
  const auto parts = make_partitions({{0}, {1, 2}}, labeled({0, 1, 2}), 3);
  CHECK(partition_histogram(parts) == std::vector<std::size_t>{1, 1});
}

TEST_CASE("builtin models have their declared partition structure") {
  for (const auto& m : builtin_models()) {
    CAPTURE(m.name);
    const auto cliques = maximal_cliques(build_po_graph(m.primitives));
    CHECK(clique_histogram(cliques) == m.expected_histogram);
  }
  CHECK(builtin_model("m2-analog").primitives.size() == 26);
  CHECK(maximal_cliques(build_po_graph(builtin_model("m1-analog").primitives)).size() == 2);
}
