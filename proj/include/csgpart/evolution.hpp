#pragma once

// Genetic search over CSG trees for one partition.
//
// Objective, maximized:
//   E(t) = sum_i [ exp(-d_i^2) + exp(-theta_i^2) ] - alpha * size(t)
//   d_i     = beta * f_t(s_i)
//   theta_i = gamma * acos(clamp(grad_hat f_t(s_i) . n_i, -1, 1))
// A degenerate gradient scores theta_i = gamma * pi.

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "csgpart/csg_tree.hpp"
#include "csgpart/overlap_graph.hpp"
#include "csgpart/parallel.hpp"
#include "csgpart/point_cloud.hpp"

namespace csgpart {

struct GaParams {
  std::size_t population_size = 150;       // n_T
  std::size_t elite_count = 2;             // n_b
  double crossover_probability = 0.3;      // gamma_cr
  double mutation_probability = 0.3;       // gamma_mu
  double subtree_probability = 0.5;        // mu_mu
  std::size_t tournament_size = 2;         // k_ts
  std::optional<double> size_weight;       // alpha; unset means ln(#points)
  double distance_weight = 100.0;          // beta
  double angle_weight = 18.0 / std::numbers::pi;  // gamma
  std::size_t stagnation_window = 10;      // n_tc
  std::size_t max_iterations = 200;
  std::uint64_t seed = 0;

  /// Throws ContractViolation when a field breaks its documented range.
  void validate() const;

  double alpha_for(std::size_t point_count) const;
};

struct ScoredTree {
  CsgTree tree;
  double score = 0.0;
};

/// ceil(sqrt(pi/2 * n * (n - 1))), and 1 for a single primitive.
int max_height(int primitive_count);

/// Direct evaluation of the objective from eval_tree and a central finite
/// difference of the tree field. Reference path; the GA uses FitnessEvaluator.
double fitness(const CsgTree& t, std::span<const PointSample> points,
               std::span<const Primitive> primitives, const GaParams& params);

/// Precomputes per (primitive, point) objective terms so that scoring a tree
/// only has to select, through min/max/negation, which primitive and sign
/// wins at each point. Immutable after construction and safe to share.
class FitnessEvaluator {
 public:
  FitnessEvaluator(std::span<const Primitive> primitives, std::span<const int> alphabet,
                   std::span<const PointSample> points, const GaParams& params);

  double score(const CsgTree& t) const;

  std::size_t point_count() const { return point_count_; }
  double alpha() const { return alpha_; }

 private:
  std::size_t slot(int primitive_id) const;

  std::size_t point_count_ = 0;
  double alpha_ = 0.0;
  std::vector<int> slot_of_id_;
  std::vector<double> values_;       // [slot][point] field value
  std::vector<double> terms_;        // [slot][sign][point] per-point objective term
};

/// Descending score; ties go to the smaller tree, then the lower index.
/// With a pool, candidates are scored concurrently.
std::vector<ScoredTree> rank(std::span<const CsgTree> population, const FitnessEvaluator& fitness,
                             const WorkerPool* pool = nullptr);

/// Best of `k` members drawn uniformly with replacement from a ranked list.
const CsgTree& tournament_select(std::span<const ScoredTree> ranked, std::size_t k, Rng& rng);

/// With probability `p`, swaps uniformly chosen subtrees of a and b.
std::pair<CsgTree, CsgTree> crossover(const CsgTree& a, const CsgTree& b, double p, Rng& rng);

/// With probability `p_mutate` mutates: with probability `p_subtree` one
/// uniformly chosen subtree is regrown within the remaining height budget,
/// otherwise the whole tree is regrown.
CsgTree mutate(const CsgTree& t, double p_mutate, double p_subtree, std::span<const int> alphabet,
               int h_max, Rng& rng);

struct TraceRow {
  std::size_t iteration = 0;
  double best_score = 0.0;
  double mean_score = 0.0;
  std::size_t best_size = 0;
};

struct EvolveResult {
  ScoredTree best;                 // simplified all-time best
  std::vector<TraceRow> trace;     // one row per ranking
};

/// Runs the GA on one partition. `cloud` is the full model cloud; the
/// partition's point indices select from it. Throws InputError for an empty
/// partition or point set.
EvolveResult evolve(const Partition& partition, std::span<const Primitive> primitives,
                    std::span<const PointSample> cloud, const GaParams& params,
                    const WorkerPool* fitness_pool = nullptr);

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace, int partition_index);

}  // namespace csgpart
