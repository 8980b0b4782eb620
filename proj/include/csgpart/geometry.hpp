#pragma once

// Signed distance fields for the primitive solids and the min/max Boolean
// combinators.
//
// SIGN CONVENTION: every field in this library is POSITIVE INSIDE the solid,
// zero on its surface and negative outside. Union is max, intersection is min.
// This is the opposite of most SDF code; gradients therefore point inward.

#include <optional>
#include <span>
#include <variant>

#include <Eigen/Core>

namespace csgpart {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kDefaultOverlapMargin = 0.02;
inline constexpr double kGradientStep = 1e-4;
inline constexpr double kDegenerateGradientNorm = 1e-9;

/// Rigid transform from primitive-local to model coordinates.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 to_local(const Vec3& x) const { return rotation.transpose() * (x - translation); }
  Vec3 to_world(const Vec3& local) const { return rotation * local + translation; }
};

struct Sphere {
  double radius = 1.0;
};

struct Box {
  Vec3 half_extents = Vec3::Ones();
};

/// Capped cylinder along the local z axis, centered at the local origin.
struct Cylinder {
  double radius = 1.0;
  double half_height = 1.0;
};

/// Capped cone with its apex at the local origin, opening toward local -z;
/// the base disc lies at z = -height.
struct Cone {
  double half_angle = 0.5;
  double height = 1.0;
};

/// Box field plus amplitude * sin(w x) sin(w y) sin(w z) in local coordinates.
struct WarpedBox {
  Vec3 half_extents = Vec3::Ones();
  double amplitude = 0.0;
  double frequency = 1.0;
};

using Shape = std::variant<Sphere, Box, Cylinder, Cone, WarpedBox>;

enum class PrimitiveKind { Sphere, Box, Cylinder, Cone, WarpedBox };

const char* to_string(PrimitiveKind kind);

struct Primitive {
  int id = 0;
  Shape shape;
  Pose pose;

  PrimitiveKind kind() const { return static_cast<PrimitiveKind>(shape.index()); }
};

/// Throws InputError when sizes are non-positive or the rotation is not
/// orthonormal (tolerance 1e-9).
void validate(const Primitive& p);

/// validate() on every member plus ids unique and contiguous from 0.
void validate_primitive_set(std::span<const Primitive> primitives);

/// Model-table lookup by id; ids are contiguous, so this is an index check.
const Primitive& find_primitive(std::span<const Primitive> primitives, int id);

double eval_primitive(const Primitive& p, const Vec3& x);

/// Exact gradient where one is implemented (sphere, box, cylinder).
std::optional<Vec3> analytic_gradient(const Primitive& p, const Vec3& x);

enum class BoolOp { Union, Intersection, Difference, Complement };

inline double unite(double a, double b) { return a > b ? a : b; }
inline double intersect(double a, double b) { return a < b ? a : b; }
inline double complement(double a) { return -a; }
inline double subtract(double a, double b) { return intersect(a, complement(b)); }

/// Arity-checked combinator: complement takes one value, the rest two.
double combine(BoolOp op, std::span<const double> values);

/// Central finite difference, one probe pair per axis.
template <class Field>
Vec3 gradient(const Field& field, const Vec3& x, double h = kGradientStep) {
  Vec3 g;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 forward = x;
    Vec3 backward = x;
    forward[axis] += h;
    backward[axis] -= h;
    g[axis] = (field(forward) - field(backward)) / (2.0 * h);
  }
  return g;
}

struct UnitGradient {
  Vec3 direction = Vec3::Zero();
  bool degenerate = true;
};

UnitGradient normalize_gradient(const Vec3& g);

template <class Field>
UnitGradient normalized_gradient(const Field& field, const Vec3& x, double h = kGradientStep) {
  return normalize_gradient(gradient(field, x, h));
}

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Aabb expanded(double margin) const {
    return {min.array() - margin, max.array() + margin};
  }
  Aabb merged(const Aabb& other) const {
    return {min.cwiseMin(other.min), max.cwiseMax(other.max)};
  }
  bool contains(const Vec3& x) const {
    return (x.array() >= min.array()).all() && (x.array() <= max.array()).all();
  }
  Vec3 extent() const { return max - min; }
};

/// Conservative box around {x : f_p(x) >= 0}, grown by `margin` on every side.
Aabb primitive_aabb(const Primitive& p, double margin = 0.0);

/// Closed-interval test: touching boxes overlap.
inline bool aabb_overlap(const Aabb& a, const Aabb& b) {
  return (a.min.array() <= b.max.array()).all() && (b.min.array() <= a.max.array()).all();
}

/// Union of the primitive boxes (margin 0). Requires a non-empty span.
Aabb model_aabb(std::span<const Primitive> primitives);

/// Uniformly scales and translates a primitive (x -> scale * x + offset).
Primitive transformed(const Primitive& p, double scale, const Vec3& offset);

}  // namespace csgpart
