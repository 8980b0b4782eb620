#include "csgpart/merge.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "csgpart/errors.hpp"

namespace csgpart {

std::vector<std::uint64_t> subtree_fingerprints(const CsgTree& t) {
  std::vector<std::uint64_t> fp(t.size());
  for (std::size_t i = t.size(); i-- > 0;) {
    const Node& n = t.node(i);
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(n.kind) * 0x100000001B3ULL +
                                 static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.leaf)));
    for (int k = 0; k < arity(n.kind); ++k) {
      // Position-dependent mixing keeps diff(a, b) and diff(b, a) apart.
      h = splitmix64(h ^ (fp[t.child(i, k)] + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k + 1)));
    }
    fp[i] = h;
  }
  return fp;
}

std::vector<SubtreeMatch> common_subtrees(const CsgTree& t0, const CsgTree& t1) {
  const auto fp0 = subtree_fingerprints(t0);
  const auto fp1 = subtree_fingerprints(t1);
  std::map<std::uint64_t, std::vector<std::size_t>> by_fp1;
  for (std::size_t j = 0; j < t1.size(); ++j) by_fp1[fp1[j]].push_back(j);

  std::vector<SubtreeMatch> matches;
  for (std::size_t i = 0; i < t0.size(); ++i) {
    const auto it = by_fp1.find(fp0[i]);
    if (it == by_fp1.end()) continue;
    // Same fingerprint: confirm structurally, then group equal structures.
    auto existing = std::find_if(matches.begin(), matches.end(), [&](const SubtreeMatch& m) {
      return m.fingerprint == fp0[i] && t0.subtree_equals(i, m.subtree, 0);
    });
    if (existing != matches.end()) {
      existing->in_first.push_back(i);
      continue;
    }
    SubtreeMatch m{t0.subtree(i), {i}, {}, fp0[i]};
    for (std::size_t j : it->second) {
      if (t0.subtree_equals(i, t1, j)) m.in_second.push_back(j);
    }
    if (!m.in_second.empty()) matches.push_back(std::move(m));
  }
  std::stable_sort(matches.begin(), matches.end(), [](const SubtreeMatch& a, const SubtreeMatch& b) {
    if (a.subtree.size() != b.subtree.size()) return a.subtree.size() > b.subtree.size();
    if (a.fingerprint != b.fingerprint) return a.fingerprint < b.fingerprint;
    return serialize(a.subtree) < serialize(b.subtree);
  });
  return matches;
}

namespace {

bool reaches(const CsgTree& t, std::size_t current, std::size_t node) {
  if (current == node) return true;
  switch (t.node(current).kind) {
    case NodeKind::Difference: return reaches(t, t.child(current, 0), node);
    case NodeKind::Union:
      return reaches(t, t.child(current, 0), node) || reaches(t, t.child(current, 1), node);
    default: return false;
  }
}

std::vector<std::size_t> valid_only(const CsgTree& t, const std::vector<std::size_t>& nodes) {
  std::vector<std::size_t> out;
  for (std::size_t n : nodes) {
    if (is_valid_candidate(t, n)) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool is_valid_candidate(const CsgTree& t, std::size_t node) {
  if (node >= t.size()) throw ContractViolation("is_valid_candidate: node is not part of the tree");
  return reaches(t, 0, node);
}

std::optional<CsgTree> merge_pair(const CsgTree& t0, const CsgTree& t1) {
  for (const SubtreeMatch& match : common_subtrees(t0, t1)) {
    const auto valid0 = valid_only(t0, match.in_first);
    const auto valid1 = valid_only(t1, match.in_second);
    if (valid0.empty() && valid1.empty()) continue;

    bool replace_in_first;
    if (!valid0.empty() && !valid1.empty()) {
      replace_in_first = t0.size() >= t1.size();
    } else {
      replace_in_first = !valid0.empty();
    }
    const CsgTree merged = replace_in_first ? t0.with_subtree(valid0.front(), t1)
                                            : t1.with_subtree(valid1.front(), t0);
    if (auto simplified = simplify(merged)) return *simplified;
    return merged;
  }
  return std::nullopt;
}

CsgTree merge_all(std::vector<CsgTree> trees) {
  if (trees.empty()) throw ContractViolation("merge_all: no trees");
  std::deque<CsgTree> list(std::make_move_iterator(trees.begin()), std::make_move_iterator(trees.end()));
  std::size_t stuck = 0;   // consecutive heads that merged with nothing
  while (list.size() > 1) {
    CsgTree t0 = std::move(list.front());
    list.pop_front();
    const std::size_t others = list.size();
    bool merged_any = false;
    for (std::size_t tried = 0; tried < others; ++tried) {
      CsgTree t1 = std::move(list.front());
      list.pop_front();
      if (auto merged = merge_pair(t0, t1)) {
        list.push_front(std::move(*merged));
        merged_any = true;
        break;
      }
      list.push_back(std::move(t1));
    }
    if (merged_any) {
      stuck = 0;
      continue;
    }
    list.push_back(std::move(t0));
    if (++stuck == list.size()) {
      std::string names;
      for (const auto& t : list) names += "\n  " + serialize(t);
      throw NonMergeableError("no pair of the remaining " + std::to_string(list.size()) +
                              " trees shares a mergeable subtree:" + names);
    }
  }
  return std::move(list.front());
}

}  // namespace csgpart
