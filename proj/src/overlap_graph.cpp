#include "csgpart/overlap_graph.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "csgpart/errors.hpp"

namespace csgpart {

PoGraph::PoGraph(std::size_t vertex_count)
    : adjacency_(vertex_count, std::vector<char>(vertex_count, 0)), neighbors_(vertex_count) {}

void PoGraph::add_edge(int a, int b) {
  const auto n = static_cast<int>(vertex_count());
  if (a < 0 || b < 0 || a >= n || b >= n) throw ContractViolation("add_edge: vertex out of range");
  if (a == b) throw ContractViolation("add_edge: self-loop");
  auto& cell = adjacency_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  if (cell) return;
  cell = 1;
  adjacency_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
  auto insert_sorted = [](std::vector<int>& v, int x) {
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
  };
  insert_sorted(neighbors_[static_cast<std::size_t>(a)], b);
  insert_sorted(neighbors_[static_cast<std::size_t>(b)], a);
  ++edge_count_;
}

bool PoGraph::adjacent(int a, int b) const {
  return adjacency_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
}

std::vector<std::pair<int, int>> PoGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count_);
  for (int i = 0; i < static_cast<int>(vertex_count()); ++i) {
    for (int j : neighbors(i)) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

PoGraph build_po_graph(std::span<const Primitive> primitives, double margin) {
  if (primitives.empty()) throw ContractViolation("build_po_graph: no primitives");
  std::vector<Aabb> boxes;
  boxes.reserve(primitives.size());
  for (const auto& p : primitives) boxes.push_back(primitive_aabb(p, margin));
  PoGraph g(primitives.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (aabb_overlap(boxes[i], boxes[j])) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return g;
}

namespace {

class BronKerbosch {
 public:
  explicit BronKerbosch(const PoGraph& g) : g_(g) {}

  std::vector<std::vector<int>> run() {
    std::vector<int> r;
    std::vector<int> p(g_.vertex_count());
    for (std::size_t v = 0; v < p.size(); ++v) p[v] = static_cast<int>(v);
    expand(r, p, {});
    for (auto& c : cliques_) std::sort(c.begin(), c.end());
    std::sort(cliques_.begin(), cliques_.end());
    return std::move(cliques_);
  }

 private:
  std::vector<int> restrict_to_neighbors(const std::vector<int>& set, int v) const {
    std::vector<int> out;
    for (int u : set) {
      if (g_.adjacent(u, v)) out.push_back(u);
    }
    return out;
  }

  int choose_pivot(const std::vector<int>& p, const std::vector<int>& x) const {
    int best = -1;
    std::size_t best_count = 0;
    auto consider = [&](int u) {
      std::size_t count = 0;
      for (int v : p) count += g_.adjacent(u, v) ? 1 : 0;
      if (best < 0 || count > best_count) {
        best = u;
        best_count = count;
      }
    };
    for (int u : p) consider(u);
    for (int u : x) consider(u);
    return best;
  }

  void expand(std::vector<int>& r, std::vector<int> p, std::vector<int> x) {
    if (p.empty()) {
      if (x.empty()) cliques_.push_back(r);
      return;
    }
    const int pivot = choose_pivot(p, x);
    std::vector<int> candidates;
    for (int v : p) {
      if (!g_.adjacent(pivot, v)) candidates.push_back(v);
    }
    for (int v : candidates) {
      r.push_back(v);
      expand(r, restrict_to_neighbors(p, v), restrict_to_neighbors(x, v));
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  }

  const PoGraph& g_;
  std::vector<std::vector<int>> cliques_;
};

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const PoGraph& g) {
  if (g.vertex_count() == 0) return {};
  return BronKerbosch(g).run();
}

std::vector<Partition> make_partitions(const std::vector<std::vector<int>>& cliques,
                                       std::span<const PointSample> cloud,
                                       std::size_t primitive_count) {
  std::vector<std::vector<std::size_t>> by_label(primitive_count);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const int label = cloud[i].label;
    if (label < 0 || static_cast<std::size_t>(label) >= primitive_count) {
      throw InputError("point " + std::to_string(i) + " has no valid primitive label (" +
                       std::to_string(label) + ")");
    }
    by_label[static_cast<std::size_t>(label)].push_back(i);
  }
  std::vector<Partition> out;
  out.reserve(cliques.size());
  for (const auto& clique : cliques) {
    Partition part;
    part.primitives = clique;
    std::sort(part.primitives.begin(), part.primitives.end());
    for (int id : part.primitives) {
      const auto& pts = by_label.at(static_cast<std::size_t>(id));
      part.points.insert(part.points.end(), pts.begin(), pts.end());
    }
    std::sort(part.points.begin(), part.points.end());
    out.push_back(std::move(part));
  }
  return out;
}

std::vector<std::size_t> clique_histogram(const std::vector<std::vector<int>>& cliques) {
  std::vector<std::size_t> hist;
  for (const auto& c : cliques) {
    if (c.empty()) continue;
    if (hist.size() < c.size()) hist.resize(c.size(), 0);
    ++hist[c.size() - 1];
  }
  return hist;
}

std::vector<std::size_t> partition_histogram(std::span<const Partition> partitions) {
  std::vector<std::vector<int>> cliques;
  cliques.reserve(partitions.size());
  for (const auto& p : partitions) cliques.push_back(p.primitives);
  return clique_histogram(cliques);
}

void write_edge_list(std::ostream& out, const PoGraph& g) {
  for (const auto& [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

}  // namespace csgpart
