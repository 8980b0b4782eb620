#pragma once

// Joining per-partition trees through shared subtrees.
//
// Two trees merge when a subtree common to both sits at a position that is
// reachable from the root only through union children and left operands of
// differences. That occurrence is replaced by the other tree's root, so no
// operation is added and every operand order is kept.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csgpart/csg_tree.hpp"

namespace csgpart {

struct SubtreeMatch {
  CsgTree subtree;
  std::vector<std::size_t> in_first;    // occurrence roots in t0 (pre-order indices)
  std::vector<std::size_t> in_second;   // occurrence roots in t1
  std::uint64_t fingerprint = 0;
};

/// Structural hash of every subtree, indexed by pre-order position.
std::vector<std::uint64_t> subtree_fingerprints(const CsgTree& t);

/// All subtrees present in both trees, largest first; equal sizes are ordered
/// by fingerprint, then by serialized form.
std::vector<SubtreeMatch> common_subtrees(const CsgTree& t0, const CsgTree& t1);

/// True when `node` is reachable from the root through union children and
/// the left child of differences. Throws ContractViolation if `node` is not
/// a node index of `t`.
bool is_valid_candidate(const CsgTree& t, std::size_t node);

/// Tries the matches largest first. The valid occurrence in the larger tree
/// (t0 on a tie) is replaced by the other tree's root; the first occurrence in
/// pre-order wins. The result is simplified. nullopt if nothing is valid.
std::optional<CsgTree> merge_pair(const CsgTree& t0, const CsgTree& t1);

/// Folds a list of trees into one: take t0 and t1 from the head, on success
/// push the result to the front, otherwise rotate t1 to the back. A head that
/// merges with nothing goes to the back too. Throws NonMergeableError once
/// every remaining tree has failed as head in a row.
CsgTree merge_all(std::vector<CsgTree> trees);

}  // namespace csgpart
