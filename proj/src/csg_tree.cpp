#include "csgpart/csg_tree.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "csgpart/errors.hpp"

namespace csgpart {

int arity(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf: return 0;
    case NodeKind::Complement: return 1;
    default: return 2;
  }
}

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf: return "leaf";
    case NodeKind::Union: return "union";
    case NodeKind::Intersection: return "inter";
    case NodeKind::Difference: return "diff";
    case NodeKind::Complement: return "comp";
  }
  return "?";
}

CsgTree CsgTree::leaf(int primitive_id) {
  return CsgTree({Node{NodeKind::Leaf, primitive_id, 1}});
}

CsgTree CsgTree::make(NodeKind op, const CsgTree& left, const CsgTree& right) {
  if (arity(op) != 2) throw ContractViolation("CsgTree::make: operator is not binary");
  std::vector<Node> nodes;
  nodes.reserve(1 + left.size() + right.size());
  nodes.push_back({op, -1, static_cast<std::uint32_t>(1 + left.size() + right.size())});
  nodes.insert(nodes.end(), left.nodes_.begin(), left.nodes_.end());
  nodes.insert(nodes.end(), right.nodes_.begin(), right.nodes_.end());
  return CsgTree(std::move(nodes));
}

CsgTree CsgTree::make_complement(const CsgTree& child) {
  std::vector<Node> nodes;
  nodes.reserve(1 + child.size());
  nodes.push_back({NodeKind::Complement, -1, static_cast<std::uint32_t>(1 + child.size())});
  nodes.insert(nodes.end(), child.nodes_.begin(), child.nodes_.end());
  return CsgTree(std::move(nodes));
}

CsgTree CsgTree::from_preorder(std::vector<Node> nodes) {
  std::size_t open = 1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (open == 0) throw ContractViolation("from_preorder: trailing nodes after a complete tree");
    open = open - 1 + static_cast<std::size_t>(arity(nodes[i].kind));
    if (nodes[i].kind != NodeKind::Leaf) nodes[i].leaf = -1;
  }
  if (open != 0 || nodes.empty()) throw ContractViolation("from_preorder: incomplete tree");
  for (std::size_t i = nodes.size(); i-- > 0;) {
    std::uint32_t span = 1;
    const int n = arity(nodes[i].kind);
    std::size_t c = i + 1;
    for (int k = 0; k < n; ++k) {
      span += nodes[c].span;
      c += nodes[c].span;
    }
    nodes[i].span = span;
  }
  return CsgTree(std::move(nodes));
}

std::vector<int> CsgTree::node_depths() const {
  std::vector<int> depths(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const int n = arity(nodes_[i].kind);
    for (int k = 0; k < n; ++k) depths[child(i, k)] = depths[i] + 1;
  }
  return depths;
}

int CsgTree::depth() const {
  const auto depths = node_depths();
  return *std::max_element(depths.begin(), depths.end());
}

CsgTree CsgTree::subtree(std::size_t i) const {
  return CsgTree(std::vector<Node>(nodes_.begin() + static_cast<std::ptrdiff_t>(i),
                                   nodes_.begin() + static_cast<std::ptrdiff_t>(i + nodes_[i].span)));
}

CsgTree CsgTree::with_subtree(std::size_t i, const CsgTree& replacement) const {
  std::vector<Node> nodes;
  nodes.reserve(nodes_.size() - nodes_[i].span + replacement.size());
  nodes.insert(nodes.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(i));
  nodes.insert(nodes.end(), replacement.nodes_.begin(), replacement.nodes_.end());
  nodes.insert(nodes.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(i + nodes_[i].span),
               nodes_.end());
  return from_preorder(std::move(nodes));
}

std::vector<int> CsgTree::leaf_ids() const {
  std::vector<int> ids;
  for (const auto& n : nodes_) {
    if (n.kind == NodeKind::Leaf) ids.push_back(n.leaf);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool CsgTree::subtree_equals(std::size_t i, const CsgTree& other, std::size_t j) const {
  const std::size_t n = nodes_[i].span;
  if (other.nodes_[j].span != n) return false;
  return std::equal(nodes_.begin() + static_cast<std::ptrdiff_t>(i),
                    nodes_.begin() + static_cast<std::ptrdiff_t>(i + n),
                    other.nodes_.begin() + static_cast<std::ptrdiff_t>(j));
}

namespace {

double eval_node(const CsgTree& t, std::size_t i, const Vec3& x,
                 std::span<const Primitive> primitives) {
  const Node& n = t.node(i);
  switch (n.kind) {
    case NodeKind::Leaf: return eval_primitive(find_primitive(primitives, n.leaf), x);
    case NodeKind::Complement: return complement(eval_node(t, i + 1, x, primitives));
    default: break;
  }
  const double a = eval_node(t, t.child(i, 0), x, primitives);
  const double b = eval_node(t, t.child(i, 1), x, primitives);
  switch (n.kind) {
    case NodeKind::Union: return unite(a, b);
    case NodeKind::Intersection: return intersect(a, b);
    default: return subtract(a, b);
  }
}

void grow(std::vector<Node>& out, std::span<const int> alphabet, int depth, int h_max, Rng& rng) {
  const double p_leaf =
      depth >= h_max ? 1.0 : std::max(0.5, static_cast<double>(depth) / h_max);
  if (bernoulli(rng, p_leaf)) {
    out.push_back({NodeKind::Leaf, alphabet[uniform_index(rng, alphabet.size())], 1});
    return;
  }
  static constexpr NodeKind kOps[] = {NodeKind::Union, NodeKind::Intersection,
                                      NodeKind::Difference};
  out.push_back({kOps[uniform_index(rng, 3)], -1, 1});
  grow(out, alphabet, depth + 1, h_max, rng);
  grow(out, alphabet, depth + 1, h_max, rng);
}

enum class Status { Normal, Empty, Universe };

struct Reduced {
  CsgTree tree;
  Status status;
};

// Empty results keep a witness tree (the diff(X, X) that produced them) so a
// complement over an empty child can be emitted without a marker node.
Reduced reduce(const CsgTree& t, std::size_t i, bool& fired) {
  const Node& n = t.node(i);
  if (n.kind == NodeKind::Leaf) return {CsgTree::leaf(n.leaf), Status::Normal};

  if (n.kind == NodeKind::Complement) {
    Reduced c = reduce(t, i + 1, fired);
    if (c.status == Status::Empty) return {CsgTree::make_complement(c.tree), Status::Universe};
    if (c.status == Status::Universe) return {c.tree.subtree(1), Status::Empty};
    if (c.tree.root().kind == NodeKind::Complement) return {c.tree.subtree(1), Status::Normal};
    return {CsgTree::make_complement(c.tree), Status::Normal};
  }

  Reduced a = reduce(t, t.child(i, 0), fired);
  Reduced b = reduce(t, t.child(i, 1), fired);
  const bool a_empty = a.status == Status::Empty;
  const bool b_empty = b.status == Status::Empty;
  switch (n.kind) {
    case NodeKind::Union:
      if (a_empty || b_empty) {
        fired = true;
        return a_empty ? b : a;
      }
      if (a.tree == b.tree) return a;
      break;
    case NodeKind::Intersection:
      if (a_empty || b_empty) {
        fired = true;
        return a_empty ? a : b;
      }
      if (a.tree == b.tree) return a;
      break;
    case NodeKind::Difference:
      if (a_empty || b_empty) {
        fired = true;
        return a;
      }
      if (a.tree == b.tree) {
        fired = true;
        return {CsgTree::make(NodeKind::Difference, a.tree, b.tree), Status::Empty};
      }
      break;
    default: break;
  }
  return {CsgTree::make(n.kind, a.tree, b.tree), Status::Normal};
}

void write(const CsgTree& t, std::size_t i, std::string& out) {
  const Node& n = t.node(i);
  if (n.kind == NodeKind::Leaf) {
    out += 'p';
    out += std::to_string(n.leaf);
    return;
  }
  out += '(';
  out += to_string(n.kind);
  for (int k = 0; k < arity(n.kind); ++k) {
    out += ' ';
    write(t, t.child(i, k), out);
  }
  out += ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  CsgTree run() {
    std::vector<Node> nodes;
    node(nodes);
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, "end of input");
    return CsgTree::from_preorder(std::move(nodes));
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void node(std::vector<Node>& nodes) {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(pos_, "leaf 'p<id>' or '('");
    if (text_[pos_] == '(') {
      ++pos_;
      skip_space();
      const std::size_t at = pos_;
      const std::string_view op = word();
      NodeKind kind;
      if (op == "union") kind = NodeKind::Union;
      else if (op == "inter") kind = NodeKind::Intersection;
      else if (op == "diff") kind = NodeKind::Difference;
      else if (op == "comp") kind = NodeKind::Complement;
      else throw ParseError(at, "operator 'union', 'inter', 'diff' or 'comp'");
      nodes.push_back({kind, -1, 1});
      for (int k = 0; k < arity(kind); ++k) node(nodes);
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError(pos_, "')'");
      ++pos_;
      return;
    }
    const std::size_t at = pos_;
    const std::string_view leaf = word();
    if (leaf.size() < 2 || leaf[0] != 'p' ||
        !std::all_of(leaf.begin() + 1, leaf.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ParseError(at, "leaf 'p<id>' or '('");
    }
    if (leaf.size() > 10) throw ParseError(at, "primitive id below 2^31");
    const long id = std::stol(std::string(leaf.substr(1)));
    if (id > 0x7fffffffL) throw ParseError(at, "primitive id below 2^31");
    nodes.push_back({NodeKind::Leaf, static_cast<std::int32_t>(id), 1});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

double eval_tree(const CsgTree& t, const Vec3& x, std::span<const Primitive> primitives) {
  return eval_node(t, 0, x, primitives);
}

CsgTree random_tree(std::span<const int> alphabet, int h_max, Rng& rng) {
  if (alphabet.empty()) throw ContractViolation("random_tree: empty alphabet");
  if (h_max < 0) throw ContractViolation("random_tree: negative height bound");
  std::vector<Node> nodes;
  grow(nodes, alphabet, 0, h_max, rng);
  return CsgTree::from_preorder(std::move(nodes));
}

SimplifyOutcome simplify_traced(const CsgTree& t) {
  SimplifyOutcome outcome;
  Reduced r = reduce(t, 0, outcome.empty_rewrite);
  if (r.status != Status::Empty) outcome.tree = std::move(r.tree);
  return outcome;
}

std::string serialize(const CsgTree& t) {
  std::string out;
  write(t, 0, out);
  return out;
}

CsgTree parse(std::string_view text) { return Parser(text).run(); }

}  // namespace csgpart
