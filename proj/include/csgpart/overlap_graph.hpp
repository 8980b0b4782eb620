#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "csgpart/geometry.hpp"
#include "csgpart/point_cloud.hpp"

namespace csgpart {

/// Undirected primitive-overlap graph. Edges are stored once as (i, j), i < j.
class PoGraph {
 public:
  explicit PoGraph(std::size_t vertex_count);

  /// Adds the undirected edge; self-loops and out-of-range ids are contract
  /// violations, duplicates are ignored.
  void add_edge(int a, int b);

  std::size_t vertex_count() const { return adjacency_.size(); }
  bool adjacent(int a, int b) const;
  const std::vector<int>& neighbors(int v) const { return neighbors_[static_cast<std::size_t>(v)]; }

  /// Sorted edge list.
  std::vector<std::pair<int, int>> edges() const;
  std::size_t edge_count() const { return edge_count_; }

 private:
  std::vector<std::vector<char>> adjacency_;
  std::vector<std::vector<int>> neighbors_;
  std::size_t edge_count_ = 0;
};

/// Edge (i, j) iff the margin-grown AABBs of i and j overlap. Pairwise scan.
PoGraph build_po_graph(std::span<const Primitive> primitives,
                       double margin = kDefaultOverlapMargin);

/// All maximal cliques (Bron-Kerbosch with pivoting). Each clique is sorted
/// ascending; the list is sorted lexicographically, i.e. by smallest member
/// first. Isolated vertices come out as singletons.
std::vector<std::vector<int>> maximal_cliques(const PoGraph& g);

/// One unit of independent search: a clique and the points labeled by it.
struct Partition {
  std::vector<int> primitives;        // sorted ids
  std::vector<std::size_t> points;    // ascending indices into the cloud
};

/// Every partition takes all points whose label is one of its primitives; a
/// primitive shared by several cliques contributes its points to each.
/// Throws InputError for labels outside [0, primitive_count).
std::vector<Partition> make_partitions(const std::vector<std::vector<int>>& cliques,
                                       std::span<const PointSample> cloud,
                                       std::size_t primitive_count);

/// Entry k counts the partitions with k + 1 primitives.
std::vector<std::size_t> partition_histogram(std::span<const Partition> partitions);
std::vector<std::size_t> clique_histogram(const std::vector<std::vector<int>>& cliques);

/// "i j" per line.
void write_edge_list(std::ostream& out, const PoGraph& g);

}  // namespace csgpart
