#pragma once

// Independent reference implementations used to check library results.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "csgpart/csg_tree.hpp"
#include "csgpart/geometry.hpp"

namespace oracle {

using csgpart::Vec3;

/// Maximal cliques by checking every vertex subset of a graph given as an
/// adjacency matrix. Only for small graphs.
inline std::set<std::vector<int>> maximal_cliques(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  auto is_clique = [&](unsigned mask) {
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      for (int j = i + 1; j < n; ++j) {
        if ((mask >> j & 1u) && !adj[i][j]) return false;
      }
    }
    return true;
  };
  std::set<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (!is_clique(mask)) continue;
    bool maximal = true;
    for (int v = 0; v < n && maximal; ++v) {
      if (!(mask >> v & 1u) && is_clique(mask | (1u << v))) maximal = false;
    }
    if (!maximal) continue;
    std::vector<int> c;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1u) c.push_back(v);
    }
    out.insert(c);
  }
  return out;
}

/// Height bound ceil(sqrt(pi/2 * n * (n - 1))) evaluated directly.
inline int max_height(int n) {
  if (n == 1) return 1;
  return static_cast<int>(std::ceil(std::sqrt(std::numbers::pi / 2.0 * n * (n - 1))));
}

/// Folded-normal mean of |N(0, sigma^2)|.
inline double folded_normal_mean(double sigma) { return sigma * std::sqrt(2.0 / std::numbers::pi); }

/// Every subtree of `t` in serialized form, one entry per occurrence.
inline std::multiset<std::string> subtree_strings(const csgpart::CsgTree& t) {
  std::multiset<std::string> out;
  for (std::size_t i = 0; i < t.size(); ++i) out.insert(csgpart::serialize(t.subtree(i)));
  return out;
}

/// Recursive evaluation over the serialized form, independent of the flat
/// node layout.
inline double eval_text(const std::string& s, std::size_t& pos, const std::vector<double>& leaf_values) {
  while (s[pos] == ' ') ++pos;
  if (s[pos] == 'p') {
    ++pos;
    std::size_t end = pos;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    const int id = std::stoi(s.substr(pos, end - pos));
    pos = end;
    return leaf_values.at(static_cast<std::size_t>(id));
  }
  ++pos;   // '('
  std::size_t end = pos;
  while (s[end] != ' ') ++end;
  const std::string op = s.substr(pos, end - pos);
  pos = end;
  const double a = eval_text(s, pos, leaf_values);
  double r;
  if (op == "comp") {
    r = -a;
  } else {
    const double b = eval_text(s, pos, leaf_values);
    if (op == "union") r = std::max(a, b);
    else if (op == "inter") r = std::min(a, b);
    else r = std::min(a, -b);
  }
  while (s[pos] == ' ') ++pos;
  ++pos;   // ')'
  return r;
}

inline double eval_text(const std::string& s, const std::vector<double>& leaf_values) {
  std::size_t pos = 0;
  return eval_text(s, pos, leaf_values);
}

/// Central difference, written out per axis.
template <class F>
Vec3 central_difference(const F& f, const Vec3& x, double h) {
  Vec3 g;
  for (int a = 0; a < 3; ++a) {
    Vec3 e = Vec3::Zero();
    e[a] = h;
    g[a] = (f(x + e) - f(x - e)) / (2.0 * h);
  }
  return g;
}

}  // namespace oracle
