#pragma once

// CSG expression trees stored as a flat pre-order node array.
//
// Node i's first child is i + 1, its second child is i + 1 + span(i + 1).
// Trees are values: every edit returns a new tree.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csgpart/geometry.hpp"
#include "csgpart/random.hpp"

namespace csgpart {

enum class NodeKind : std::uint8_t { Leaf, Union, Intersection, Difference, Complement };

int arity(NodeKind kind);

struct Node {
  NodeKind kind = NodeKind::Leaf;
  std::int32_t leaf = -1;    // primitive id for leaves, -1 otherwise
  std::uint32_t span = 1;    // node count of the subtree rooted here

  friend bool operator==(const Node&, const Node&) = default;
};

class CsgTree {
 public:
  static CsgTree leaf(int primitive_id);
  static CsgTree make(NodeKind op, const CsgTree& left, const CsgTree& right);
  static CsgTree make_complement(const CsgTree& child);

  /// Builds from a pre-order (kind, leaf) sequence; spans are recomputed.
  /// Throws ContractViolation when the sequence is not exactly one tree.
  static CsgTree from_preorder(std::vector<Node> nodes);

  std::size_t size() const { return nodes_.size(); }
  int depth() const;
  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const Node& root() const { return nodes_.front(); }

  /// Index of child `k` (0 or 1) of node `i`.
  std::size_t child(std::size_t i, int k) const {
    return k == 0 ? i + 1 : i + 1 + nodes_[i + 1].span;
  }

  CsgTree subtree(std::size_t i) const;

  /// Copy with the subtree rooted at node `i` replaced by `replacement`.
  CsgTree with_subtree(std::size_t i, const CsgTree& replacement) const;

  /// Edge count from the root for every node, in pre-order.
  std::vector<int> node_depths() const;

  /// Sorted, de-duplicated primitive ids at the leaves.
  std::vector<int> leaf_ids() const;

  /// Structural equality of subtree `i` of this tree and subtree `j` of `other`.
  bool subtree_equals(std::size_t i, const CsgTree& other, std::size_t j) const;

  friend bool operator==(const CsgTree&, const CsgTree&) = default;

 private:
  explicit CsgTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}
  std::vector<Node> nodes_;
};

inline std::size_t tree_size(const CsgTree& t) { return t.size(); }
inline int tree_depth(const CsgTree& t) { return t.depth(); }

/// f_t(x). Throws InputError when a leaf id is missing from `primitives`.
double eval_tree(const CsgTree& t, const Vec3& x, std::span<const Primitive> primitives);

/// Random tree with depth <= h_max over `alphabet`; complement is never
/// generated. A node at depth d becomes a leaf with probability
/// max(0.5, d / h_max) and always at d == h_max.
CsgTree random_tree(std::span<const int> alphabet, int h_max, Rng& rng);

struct SimplifyOutcome {
  std::optional<CsgTree> tree;   // nullopt: the whole tree reduced to the empty solid
  bool empty_rewrite = false;    // an empty-marker rule fired somewhere
};

/// Artefact removal to a fixpoint: X op X -> X for union/intersection,
/// double complement, diff(X, X) -> empty and empty propagation.
SimplifyOutcome simplify_traced(const CsgTree& t);

inline std::optional<CsgTree> simplify(const CsgTree& t) { return simplify_traced(t).tree; }

/// Prefix form, e.g. "(diff (union p0 p1) p2)". See docs/formats.md.
std::string serialize(const CsgTree& t);
CsgTree parse(std::string_view text);

const char* to_string(NodeKind kind);

}  // namespace csgpart
