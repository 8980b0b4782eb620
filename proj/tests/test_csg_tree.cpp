#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "csgpart/csg_tree.hpp"
#include "csgpart/errors.hpp"
#include "oracles.hpp"

using namespace csgpart;

namespace {

std::vector<Primitive> random_primitives(int n, Rng& rng) {
  std::uniform_real_distribution<double> c(-0.5, 0.5), r(0.2, 0.6);
  std::vector<Primitive> out;
  for (int i = 0; i < n; ++i) {
    const Vec3 center(c(rng), c(rng), c(rng));
    if (i % 2 == 0) {
      out.push_back({i, Sphere{r(rng)}, Pose{Mat3::Identity(), center}});
    } else {
      out.push_back({i, Box{{r(rng), r(rng), r(rng)}}, Pose{Mat3::Identity(), center}});
    }
  }
  return out;
}

std::vector<double> leaf_values(std::span<const Primitive> prims, const Vec3& x) {
  std::vector<double> v;
  for (const auto& p : prims) v.push_back(eval_primitive(p, x));
  return v;
}

const std::vector<int> kAlphabet{0, 1, 2, 3, 4};

}  // namespace

TEST_CASE("size and depth") {
  CHECK(CsgTree::leaf(0).size() == 1);
  CHECK(CsgTree::leaf(0).depth() == 0);
  const CsgTree u = parse("(union p0 p1)");
  CHECK(u.size() == 3);
  CHECK(u.depth() == 1);
  const CsgTree t = parse("(union (diff p0 p1) p2)");
  CHECK(t.size() == 5);
  CHECK(t.depth() == 2);
  CHECK(t.child(0, 1) == 4);
  CHECK(t.node(4).leaf == 2);
  CHECK(t.node_depths() == std::vector<int>{0, 1, 2, 2, 1});
  CHECK(parse("(comp (comp p3))").depth() == 2);
}

TEST_CASE("construction helpers") {
  const CsgTree t = CsgTree::make(NodeKind::Difference, CsgTree::leaf(0), CsgTree::leaf(1));
  CHECK(serialize(t) == "(diff p0 p1)");
  CHECK(serialize(CsgTree::make_complement(t)) == "(comp (diff p0 p1))");
  CHECK_THROWS_AS(CsgTree::make(NodeKind::Complement, t, t), ContractViolation);
  CHECK(serialize(t.subtree(2)) == "p1");
  CHECK(serialize(t.with_subtree(2, parse("(inter p2 p3)"))) == "(diff p0 (inter p2 p3))");
  CHECK(parse("(union p3 (union p1 p3))").leaf_ids() == std::vector<int>{1, 3});

  std::vector<Node> broken{{NodeKind::Union, -1, 1}, {NodeKind::Leaf, 0, 1}};
  CHECK_THROWS_AS(CsgTree::from_preorder(broken), ContractViolation);
  std::vector<Node> trailing{{NodeKind::Leaf, 0, 1}, {NodeKind::Leaf, 1, 1}};
  CHECK_THROWS_AS(CsgTree::from_preorder(trailing), ContractViolation);
}

TEST_CASE("evaluation") {
  const std::vector<Primitive> prims{{0, Box{Vec3::Constant(0.6)}, Pose{}},
                                     {1, Sphere{0.45}, Pose{Mat3::Identity(), Vec3::Constant(0.3)}}};
  const Vec3 center = Vec3::Constant(0.3);
  CHECK(eval_tree(CsgTree::leaf(0), Vec3::Zero(), prims) == eval_primitive(prims[0], Vec3::Zero()));
  // min(f_box, -f_sphere) at the sphere center: box depth 0.3, sphere depth 0.45.
  CHECK(eval_tree(parse("(diff p0 p1)"), center, prims) == doctest::Approx(-0.45));
  Rng rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x(u(rng), u(rng), u(rng));
    CHECK(eval_tree(parse("(union p0 p0)"), x, prims) == eval_primitive(prims[0], x));
  }
  CHECK_THROWS_AS(eval_tree(CsgTree::leaf(7), center, prims), InputError);
}

TEST_CASE("flat evaluation matches recursive evaluation of the text form") {
  Rng rng(17);
  const auto prims = random_primitives(5, rng);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    CsgTree t = random_tree(kAlphabet, 6, rng);
    if (i % 5 == 0) t = CsgTree::make_complement(t);
    const std::string text = serialize(t);
    for (int k = 0; k < 20; ++k) {
      const Vec3 x(u(rng), u(rng), u(rng));
      CHECK(eval_tree(t, x, prims) == oracle::eval_text(text, leaf_values(prims, x)));
    }
  }
}

TEST_CASE("random trees") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(random_tree(kAlphabet, 0, rng).size() == 1);
  int deepest = 0;
  for (int i = 0; i < 10000; ++i) {
    const CsgTree t = random_tree(kAlphabet, 5, rng);
    deepest = std::max(deepest, t.depth());
    for (const Node& n : t.nodes()) CHECK_FALSE(n.kind == NodeKind::Complement);
  }
  CHECK(deepest <= 5);
  CHECK(deepest == 5);
  const int only[] = {4};
  for (int i = 0; i < 100; ++i) CHECK(random_tree(only, 8, rng).leaf_ids() == std::vector<int>{4});
  CHECK_THROWS_AS(random_tree(std::span<const int>{}, 3, rng), ContractViolation);
  CHECK_THROWS_AS(random_tree(kAlphabet, -1, rng), ContractViolation);
}

TEST_CASE("random tree sizes stay bounded at large height limits") {
  Rng rng(2);
  double total = 0.0;
  for (int i = 0; i < 2000; ++i) total += static_cast<double>(random_tree(kAlphabet, 60, rng).size());
  CHECK(total / 2000 < 50.0);
}

TEST_CASE("simplify removes artefacts") {
  CHECK(serialize(*simplify(parse("(inter p0 p0)"))) == "p0");
  CHECK(serialize(*simplify(parse("(union p0 p0)"))) == "p0");
  CHECK(serialize(*simplify(parse("(union p0 p1)"))) == "(union p0 p1)");
  CHECK(serialize(*simplify(parse("(comp (comp p2))"))) == "p2");
  CHECK(serialize(*simplify(parse("(union (inter p0 p0) (union p0 p0))"))) == "p0");
  CHECK(serialize(*simplify(parse("(union (diff p1 p1) p2)"))) == "p2");
  CHECK(serialize(*simplify(parse("(diff p2 (diff p1 p1))"))) == "p2");
  CHECK_FALSE(simplify(parse("(diff p0 p0)")).has_value());
  CHECK_FALSE(simplify(parse("(inter p3 (diff p1 p1))")).has_value());
  CHECK_FALSE(simplify(parse("(comp (comp (diff p1 p1)))")).has_value());

  const auto traced = simplify_traced(parse("(union (diff p1 p1) p2)"));
  CHECK(traced.empty_rewrite);
  CHECK_FALSE(simplify_traced(parse("(union p1 p1)")).empty_rewrite);

  // Complement of an empty set stays expressible without a marker node.
  const auto universe = simplify(parse("(comp (diff p1 p1))"));
  REQUIRE(universe.has_value());
  CHECK(serialize(*universe) == "(comp (diff p1 p1))");
}

TEST_CASE("simplify properties over random trees") {
  Rng rng(23);
  const auto prims = random_primitives(3, rng);
  const int alphabet[] = {0, 1, 2};
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const CsgTree t = random_tree(alphabet, 5, rng);
    const SimplifyOutcome s = simplify_traced(t);
    if (!s.tree) {
      CHECK(s.empty_rewrite);
      for (int k = 0; k < 10; ++k) CHECK(eval_tree(t, Vec3(u(rng), u(rng), u(rng)), prims) <= 0.0);
      continue;
    }
    CHECK(s.tree->size() <= t.size());
    CHECK(simplify(*s.tree) == *s.tree);
    for (int k = 0; k < 10; ++k) {
      const Vec3 x(u(rng), u(rng), u(rng));
      const double before = eval_tree(t, x, prims);
      const double after = eval_tree(*s.tree, x, prims);
      if (!s.empty_rewrite) {
        CHECK(after == before);
      } else if (std::abs(before) > 1e-12 && std::abs(after) > 1e-12) {
        CHECK((before > 0) == (after > 0));
      }
    }
  }
}

TEST_CASE("serialization") {
  CHECK(serialize(CsgTree::leaf(0)) == "p0");
  CHECK(serialize(parse("(union p0 p1)")) == "(union p0 p1)");
  CHECK(serialize(parse("  ( diff\n(union p0 p12 )\tp2 )  ")) == "(diff (union p0 p12) p2)");
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    CsgTree t = random_tree(kAlphabet, 7, rng);
    if (i % 7 == 0) t = CsgTree::make(NodeKind::Union, CsgTree::make_complement(t), t);
    CHECK(parse(serialize(t)) == t);
  }
}

TEST_CASE("parse errors report position and expectation") {
  const auto error_at = [](const char* text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return std::make_pair(e.position(), e.expected());
    }
    return std::make_pair(std::size_t{999}, std::string());
  };
  CHECK(error_at("").first == 0);
  CHECK(error_at("(union p0)").first == 9);
  CHECK(error_at("(xor p0 p1)").first == 1);
  CHECK(error_at("(union p0 p1) p2").second == "end of input");
  CHECK(error_at("(comp p0 p1)").second == "')'");
  CHECK(error_at("q1").first == 0);
  CHECK(error_at("p").first == 0);
  CHECK(error_at("p99999999999").second == "primitive id below 2^31");
}
