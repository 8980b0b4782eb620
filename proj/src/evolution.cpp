#include "csgpart/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>

#include "csgpart/errors.hpp"

namespace csgpart {

void GaParams::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation(std::string(name) + " must be in [0, 1]");
  };
  if (population_size < 2) throw ContractViolation("population size must be at least 2");
  if (elite_count >= population_size) throw ContractViolation("elite count must be below population size");
  prob(crossover_probability, "crossover probability");
  prob(mutation_probability, "mutation probability");
  prob(subtree_probability, "subtree replacement probability");
  if (tournament_size < 1) throw ContractViolation("tournament size must be at least 1");
  if ((size_weight && !(*size_weight >= 0.0)) || !(distance_weight >= 0.0) || !(angle_weight >= 0.0)) {
    throw ContractViolation("objective weights must be non-negative");
  }
  if (max_iterations < stagnation_window) {
    throw ContractViolation("iteration cap must not be below the stagnation window");
  }
}

double GaParams::alpha_for(std::size_t point_count) const {
  if (size_weight) return *size_weight;
  return std::log(static_cast<double>(std::max<std::size_t>(point_count, 1)));
}

int max_height(int primitive_count) {
  if (primitive_count < 1) throw ContractViolation("max_height: need at least one primitive");
  if (primitive_count == 1) return 1;
  const double n = primitive_count;
  return static_cast<int>(std::ceil(std::sqrt(std::numbers::pi / 2.0 * n * (n - 1.0))));
}

namespace {

double distance_term(double field, double beta) {
  const double d = beta * field;
  return std::exp(-d * d);
}

double angle_term(const UnitGradient& g, const Vec3& normal, double gamma) {
  const double angle =
      g.degenerate ? std::numbers::pi : std::acos(std::clamp(g.direction.dot(normal), -1.0, 1.0));
  const double theta = gamma * angle;
  return std::exp(-theta * theta);
}

}  // namespace

double fitness(const CsgTree& t, std::span<const PointSample> points,
               std::span<const Primitive> primitives, const GaParams& params) {
  if (points.empty()) throw ContractViolation("fitness: empty point set");
  const auto field = [&](const Vec3& x) { return eval_tree(t, x, primitives); };
  double sum = 0.0;
  for (const auto& s : points) {
    sum += distance_term(field(s.position), params.distance_weight) +
           angle_term(normalized_gradient(field, s.position), s.normal, params.angle_weight);
  }
  return sum - params.alpha_for(points.size()) * static_cast<double>(t.size());
}

FitnessEvaluator::FitnessEvaluator(std::span<const Primitive> primitives,
                                   std::span<const int> alphabet,
                                   std::span<const PointSample> points, const GaParams& params)
    : point_count_(points.size()), alpha_(params.alpha_for(points.size())) {
  if (points.empty()) throw ContractViolation("FitnessEvaluator: empty point set");
  if (alphabet.empty()) throw ContractViolation("FitnessEvaluator: empty alphabet");
  const int max_id = *std::max_element(alphabet.begin(), alphabet.end());
  slot_of_id_.assign(static_cast<std::size_t>(max_id) + 1, -1);
  for (std::size_t k = 0; k < alphabet.size(); ++k) {
    slot_of_id_.at(static_cast<std::size_t>(alphabet[k])) = static_cast<int>(k);
  }
  const std::size_t n = points.size();
  values_.resize(alphabet.size() * n);
  terms_.resize(alphabet.size() * 2 * n);
  for (std::size_t k = 0; k < alphabet.size(); ++k) {
    const Primitive& p = find_primitive(primitives, alphabet[k]);
    const auto field = [&](const Vec3& x) { return eval_primitive(p, x); };
    double* values = values_.data() + k * n;
    double* plus = terms_.data() + (2 * k) * n;
    double* minus = terms_.data() + (2 * k + 1) * n;
    for (std::size_t i = 0; i < n; ++i) {
      const PointSample& s = points[i];
      values[i] = field(s.position);
      const double dist = distance_term(values[i], params.distance_weight);
      UnitGradient g = normalized_gradient(field, s.position);
      plus[i] = dist + angle_term(g, s.normal, params.angle_weight);
      g.direction = -g.direction;
      minus[i] = dist + angle_term(g, s.normal, params.angle_weight);
    }
  }
}

std::size_t FitnessEvaluator::slot(int primitive_id) const {
  if (primitive_id < 0 || static_cast<std::size_t>(primitive_id) >= slot_of_id_.size() ||
      slot_of_id_[static_cast<std::size_t>(primitive_id)] < 0) {
    throw InputError("primitive " + std::to_string(primitive_id) + " is not in the fitness alphabet");
  }
  return static_cast<std::size_t>(slot_of_id_[static_cast<std::size_t>(primitive_id)]);
}

namespace {

struct Instruction {
  NodeKind kind;
  std::uint32_t slot;
};

void emit_postorder(const CsgTree& t, std::size_t i, std::vector<Instruction>& out,
                    const std::function<std::size_t(int)>& slot_of) {
  const Node& n = t.node(i);
  for (int k = 0; k < arity(n.kind); ++k) emit_postorder(t, t.child(i, k), out, slot_of);
  out.push_back({n.kind, n.kind == NodeKind::Leaf ? static_cast<std::uint32_t>(slot_of(n.leaf)) : 0u});
}

constexpr std::size_t kBlock = 256;

}  // namespace

double FitnessEvaluator::score(const CsgTree& t) const {
  // Stack machine over blocks of points. Each stack entry holds the field
  // value and the winning source (slot * 2 + negated) per point.
  std::vector<Instruction> program;
  program.reserve(t.size());
  emit_postorder(t, 0, program, [this](int id) { return slot(id); });

  const std::size_t n = point_count_;
  const std::size_t levels = static_cast<std::size_t>(t.depth()) + 2;
  std::vector<double> vals(levels * kBlock);
  std::vector<std::uint32_t> srcs(levels * kBlock);

  double sum = 0.0;
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t len = std::min(kBlock, n - start);
    std::size_t sp = 0;
    for (const Instruction& ins : program) {
      switch (ins.kind) {
        case NodeKind::Leaf: {
          double* v = vals.data() + sp * kBlock;
          std::uint32_t* s = srcs.data() + sp * kBlock;
          const double* col = values_.data() + ins.slot * n + start;
          const std::uint32_t tag = ins.slot * 2;
          for (std::size_t j = 0; j < len; ++j) {
            v[j] = col[j];
            s[j] = tag;
          }
          ++sp;
          break;
        }
        case NodeKind::Complement: {
          double* v = vals.data() + (sp - 1) * kBlock;
          std::uint32_t* s = srcs.data() + (sp - 1) * kBlock;
          for (std::size_t j = 0; j < len; ++j) {
            v[j] = complement(v[j]);
            s[j] ^= 1u;
          }
          break;
        }
        default: {
          double* a = vals.data() + (sp - 2) * kBlock;
          std::uint32_t* sa = srcs.data() + (sp - 2) * kBlock;
          const double* b = vals.data() + (sp - 1) * kBlock;
          const std::uint32_t* sb = srcs.data() + (sp - 1) * kBlock;
          // Mirrors unite/intersect/subtract, including which side wins ties.
          if (ins.kind == NodeKind::Union) {
            for (std::size_t j = 0; j < len; ++j) {
              const bool keep = a[j] > b[j];
              sa[j] = keep ? sa[j] : sb[j];
              a[j] = keep ? a[j] : b[j];
            }
          } else if (ins.kind == NodeKind::Intersection) {
            for (std::size_t j = 0; j < len; ++j) {
              const bool keep = a[j] < b[j];
              sa[j] = keep ? sa[j] : sb[j];
              a[j] = keep ? a[j] : b[j];
            }
          } else {
            for (std::size_t j = 0; j < len; ++j) {
              const double nb = complement(b[j]);
              const bool keep = a[j] < nb;
              sa[j] = keep ? sa[j] : (sb[j] ^ 1u);
              a[j] = keep ? a[j] : nb;
            }
          }
          --sp;
          break;
        }
      }
    }
    const std::uint32_t* s = srcs.data();
    for (std::size_t j = 0; j < len; ++j) sum += terms_[s[j] * n + start + j];
  }
  return sum - alpha_ * static_cast<double>(t.size());
}

std::vector<ScoredTree> rank(std::span<const CsgTree> population, const FitnessEvaluator& fitness,
                             const WorkerPool* pool) {
  if (population.empty()) throw ContractViolation("rank: empty population");
  std::vector<double> scores(population.size());
  auto score_one = [&](std::size_t i) { scores[i] = fitness.score(population[i]); };
  if (pool) {
    pool->parallel_for(population.size(), score_one);
  } else {
    for (std::size_t i = 0; i < population.size(); ++i) score_one(i);
  }
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return population[a].size() < population[b].size();
  });
  std::vector<ScoredTree> ranked;
  ranked.reserve(order.size());
  for (std::size_t i : order) ranked.push_back({population[i], scores[i]});
  return ranked;
}

const CsgTree& tournament_select(std::span<const ScoredTree> ranked, std::size_t k, Rng& rng) {
  if (ranked.empty()) throw ContractViolation("tournament_select: empty ranking");
  if (k < 1) throw ContractViolation("tournament_select: tournament size must be at least 1");
  std::size_t best = ranked.size();
  for (std::size_t draw = 0; draw < k; ++draw) best = std::min(best, uniform_index(rng, ranked.size()));
  return ranked[best].tree;
}

std::pair<CsgTree, CsgTree> crossover(const CsgTree& a, const CsgTree& b, double p, Rng& rng) {
  if (!bernoulli(rng, p)) return {a, b};
  const std::size_t i = uniform_index(rng, a.size());
  const std::size_t j = uniform_index(rng, b.size());
  return {a.with_subtree(i, b.subtree(j)), b.with_subtree(j, a.subtree(i))};
}

CsgTree mutate(const CsgTree& t, double p_mutate, double p_subtree, std::span<const int> alphabet,
               int h_max, Rng& rng) {
  if (!bernoulli(rng, p_mutate)) return t;
  if (bernoulli(rng, p_subtree)) {
    const std::size_t i = uniform_index(rng, t.size());
    const int node_depth = t.node_depths()[i];
    return t.with_subtree(i, random_tree(alphabet, std::max(0, h_max - node_depth), rng));
  }
  return random_tree(alphabet, h_max, rng);
}

EvolveResult evolve(const Partition& partition, std::span<const Primitive> primitives,
                    std::span<const PointSample> cloud, const GaParams& params,
                    const WorkerPool* fitness_pool) {
  params.validate();
  if (partition.primitives.empty()) throw InputError("evolve: partition has no primitives");
  if (partition.points.empty()) throw InputError("evolve: partition has no points");

  std::vector<PointSample> points;
  points.reserve(partition.points.size());
  for (std::size_t idx : partition.points) {
    if (idx >= cloud.size()) throw InputError("evolve: point index out of range");
    points.push_back(cloud[idx]);
  }
  const std::span<const int> alphabet = partition.primitives;
  const int h_max = max_height(static_cast<int>(alphabet.size()));
  const int depth_cap = 2 * h_max;
  const FitnessEvaluator evaluator(primitives, alphabet, points, params);

  Rng rng(params.seed);
  std::vector<CsgTree> population;
  population.reserve(params.population_size);
  for (std::size_t i = 0; i < params.population_size; ++i) {
    population.push_back(random_tree(alphabet, h_max, rng));
  }

  EvolveResult result{{CsgTree::leaf(alphabet.front()), 0.0}, {}};
  std::optional<ScoredTree> best;
  std::size_t stagnant = 0;
  for (std::size_t iteration = 0;; ++iteration) {
    std::vector<ScoredTree> ranked = rank(population, evaluator, fitness_pool);
    double mean = 0.0;
    for (const auto& r : ranked) mean += r.score;
    mean /= static_cast<double>(ranked.size());
    result.trace.push_back({iteration, ranked.front().score, mean, ranked.front().tree.size()});

    if (!best || ranked.front().score > best->score + 1e-9) {
      best = ranked.front();
      stagnant = 0;
    } else {
      ++stagnant;
    }
    if (stagnant >= params.stagnation_window || iteration + 1 >= params.max_iterations) break;

    std::vector<CsgTree> next;
    next.reserve(params.population_size);
    for (std::size_t e = 0; e < params.elite_count; ++e) next.push_back(ranked[e].tree);
    while (next.size() < params.population_size) {
      auto breed = [&] {
        auto children = crossover(tournament_select(ranked, params.tournament_size, rng),
                                  tournament_select(ranked, params.tournament_size, rng),
                                  params.crossover_probability, rng);
        children.first = mutate(children.first, params.mutation_probability,
                                params.subtree_probability, alphabet, h_max, rng);
        children.second = mutate(children.second, params.mutation_probability,
                                 params.subtree_probability, alphabet, h_max, rng);
        return children;
      };
      auto children = breed();
      if (children.first.depth() > depth_cap || children.second.depth() > depth_cap) {
        children = breed();
      }
      next.push_back(std::move(children.first));
      if (next.size() < params.population_size) next.push_back(std::move(children.second));
    }
    population = std::move(next);
  }

  if (auto simplified = simplify(best->tree)) {
    result.best = {*simplified, evaluator.score(*simplified)};
  } else {
    result.best = *best;
  }
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace, int partition_index) {
  for (const auto& row : trace) {
    out << partition_index << ',' << row.iteration << ',' << row.best_score << ','
        << row.mean_score << ',' << row.best_size << '\n';
  }
}

}  // namespace csgpart
