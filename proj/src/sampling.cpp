#include "csgpart/sampling.hpp"

#include <cmath>
#include <random>
#include <string>

#include "csgpart/errors.hpp"

namespace csgpart {

namespace {

Primitive sphere(int id, const Vec3& center, double radius) {
  return {id, Sphere{radius}, Pose{Mat3::Identity(), center}};
}

Primitive box(int id, const Vec3& center, const Vec3& half) {
  return {id, Box{half}, Pose{Mat3::Identity(), center}};
}

// Cylinder whose axis is world z (default) or world x.
Primitive cylinder(int id, const Vec3& center, double radius, double half_height, bool along_x = false) {
  Mat3 r = Mat3::Identity();
  if (along_x) r << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  return {id, Cylinder{radius, half_height}, Pose{r, center}};
}

Primitive box_from_ranges(int id, double x0, double x1, double y_half, double z0, double z1) {
  return box(id, {0.5 * (x0 + x1), 0.0, 0.5 * (z0 + z1)},
             {0.5 * (x1 - x0), y_half, 0.5 * (z1 - z0)});
}

CsgTree balanced(NodeKind op, const std::vector<int>& ids, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return CsgTree::leaf(ids[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  return CsgTree::make(op, balanced(op, ids, lo, mid), balanced(op, ids, mid, hi));
}

CsgTree union_of(const std::vector<int>& ids) { return balanced(NodeKind::Union, ids, 0, ids.size()); }

GroundTruthModel two_prim() {
  return {"two-prim",
          {box(0, Vec3::Zero(), Vec3::Constant(0.6)), sphere(1, Vec3::Constant(0.5), 0.45)},
          parse("(diff p0 p1)"),
          {0, 1}};
}

GroundTruthModel warped() {
  Primitive cube{0, WarpedBox{Vec3::Constant(0.5), 0.04, 8.0}, Pose{}};
  return {"warped", {cube, cylinder(1, Vec3::Zero(), 0.2, 0.7)}, parse("(diff p0 p1)"), {0, 1}};
}

// A bar with a through-hole along x and two spheres on top at either end:
// cliques {sphere A, bar, hole} and {bar, hole, sphere D}.
GroundTruthModel m1_analog() {
  return {"m1-analog",
          {sphere(0, {-0.65, 0.0, 0.25}, 0.3), box(1, Vec3::Zero(), {0.9, 0.3, 0.3}),
           cylinder(2, Vec3::Zero(), 0.15, 0.95, true), sphere(3, {0.65, 0.0, 0.25}, 0.3)},
          parse("(diff (union (union p1 p0) p3) p2)"),
          {0, 0, 2}};
}

// 13 overlapping box segments along x, each drilled by a vertical hole.
// Neighbouring stations overlap, stations two apart do not, so the maximal
// cliques are the 12 windows {box_k, hole_k, box_k+1, hole_k+1}.
GroundTruthModel m2_analog() {
  std::vector<Primitive> prims;
  std::vector<int> boxes;
  std::vector<int> holes;
  for (int k = 0; k < 13; ++k) {
    const double x = -0.9 + 0.15 * k;
    prims.push_back(box(2 * k, {x, 0.0, 0.0}, {0.09, 0.2, 0.1}));
    prims.push_back(cylinder(2 * k + 1, {x, 0.0, 0.0}, 0.06, 0.15));
    boxes.push_back(2 * k);
    holes.push_back(2 * k + 1);
  }
  return {"m2-analog", std::move(prims),
          CsgTree::make(NodeKind::Difference, union_of(boxes), union_of(holes)),
          {0, 0, 0, 12}};
}

// Stepped profile of 17 parts along x. Each part occupies a run of x
// stations; parts overlap exactly when their runs share a station, which
// gives cliques of sizes 6, 5, 3, 3, 3, 3 followed by six pairs.
GroundTruthModel mixed_analog() {
  auto station = [](int j) { return -0.88 + 0.16 * (j - 1); };
  struct Part {
    int first, last;
    double y_half, top;
  };
  const Part parts[] = {
      {1, 1, 0.30, 0.04},  {1, 2, 0.26, 0.08}, {1, 2, 0.22, 0.12}, {1, 2, 0.18, 0.16},
      {1, 3, 0.14, 0.20},  {2, 4, 0.30, 0.02}, {3, 5, 0.22, 0.10}, {4, 6, 0.16, 0.18},
      {5, 6, 0.26, 0.06},  {6, 7, 0.12, 0.26}, {7, 8, 0.20, 0.08}, {8, 9, 0.14, 0.16},
      {9, 10, 0.20, 0.06}, {10, 11, 0.12, 0.14}, {11, 12, 0.20, 0.05},
  };
  std::vector<Primitive> prims;
  prims.push_back(sphere(0, {station(1), 0.0, -0.1}, 0.05));
  int id = 1;
  for (const Part& part : parts) {
    prims.push_back(box_from_ranges(id++, station(part.first) - 0.05, station(part.last) + 0.05,
                                    part.y_half, -0.1, part.top));
  }
  prims.push_back(cylinder(id, {station(12), 0.0, 0.1}, 0.05, 0.2));
  std::vector<int> ids(prims.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return {"mixed-analog", std::move(prims), union_of(ids), {0, 6, 4, 0, 1, 1}};
}

}  // namespace

std::vector<GroundTruthModel> builtin_models() {
  return {two_prim(), warped(), m1_analog(), m2_analog(), mixed_analog()};
}

GroundTruthModel builtin_model(const std::string& name) {
  for (auto& m : builtin_models()) {
    if (m.name == name) return m;
  }
  throw InputError("unknown model '" + name + "'");
}

PointCloud sample_surface(const GroundTruthModel& model, std::size_t n, Rng& rng,
                          const SamplerOptions& options) {
  if (n < 1) throw ContractViolation("sample_surface: need at least one sample");
  const Aabb box = model_aabb(model.primitives).expanded(0.05);
  const Aabb fence = box.expanded(0.5);
  const auto field = [&](const Vec3& x) { return eval_tree(model.tree, x, model.primitives); };
  std::uniform_real_distribution<double> ux(box.min.x(), box.max.x());
  std::uniform_real_distribution<double> uy(box.min.y(), box.max.y());
  std::uniform_real_distribution<double> uz(box.min.z(), box.max.z());

  PointCloud cloud;
  cloud.reserve(n);
  const std::size_t budget = options.attempts_per_point * n;
  for (std::size_t attempt = 0; cloud.size() < n; ++attempt) {
    if (attempt >= budget) {
      throw InputError("sampling " + model.name + ": gave up after " + std::to_string(budget) +
                       " projection attempts");
    }
    Vec3 x(ux(rng), uy(rng), uz(rng));
    if (std::abs(field(x)) > options.shell_width) continue;
    bool on_surface = false;
    for (int step = 0; step < options.projection_steps; ++step) {
      const double f = field(x);
      if (std::abs(f) <= options.surface_tolerance) {
        on_surface = true;
        break;
      }
      const Vec3 g = gradient(field, x);
      const double g2 = g.squaredNorm();
      if (g2 < 1e-18) break;
      x -= (f / g2) * g;
      if (!fence.contains(x)) break;
    }
    if (!on_surface) continue;
    const UnitGradient normal = normalized_gradient(field, x);
    if (normal.degenerate) continue;

    PointSample s;
    s.position = x;
    s.normal = normal.direction;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : model.primitives) {
      const double d = std::abs(eval_primitive(p, x));
      if (d < best) {
        best = d;
        s.label = p.id;
      }
    }
    cloud.push_back(s);
  }
  return cloud;
}

PointCloud sample_model(const GroundTruthModel& model, std::size_t n, double sigma, Rng& rng,
                        const SamplerOptions& options) {
  if (!(sigma >= 0.0)) throw ContractViolation("sample_model: sigma must be non-negative");
  PointCloud cloud = sample_surface(model, n, rng, options);
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& s : cloud) {
      for (int axis = 0; axis < 3; ++axis) s.position[axis] += noise(rng);
    }
  }
  return cloud;
}

double sign_agreement(const CsgTree& a, const CsgTree& b, std::span<const Primitive> primitives,
                      const Aabb& box, int n) {
  if (n < 1) throw ContractViolation("sign_agreement: grid resolution must be positive");
  const Vec3 step = box.extent() / n;
  std::size_t agree = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 x = box.min + Vec3((i + 0.5) * step.x(), (j + 0.5) * step.y(), (k + 0.5) * step.z());
        const bool in_a = eval_tree(a, x, primitives) >= 0.0;
        const bool in_b = eval_tree(b, x, primitives) >= 0.0;
        agree += in_a == in_b ? 1 : 0;
      }
    }
  }
  return static_cast<double>(agree) / (static_cast<double>(n) * n * n);
}

}  // namespace csgpart
