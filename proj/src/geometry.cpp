#include "csgpart/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "csgpart/errors.hpp"

namespace csgpart {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Classic outside-positive box distance; callers negate.
double box_distance(const Vec3& p, const Vec3& half) {
  const Vec3 q = p.cwiseAbs() - half;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(q.maxCoeff(), 0.0);
  return outside + inside;
}

double cylinder_distance(const Vec3& p, const Cylinder& c) {
  const double radial = std::hypot(p.x(), p.y()) - c.radius;
  const double axial = std::abs(p.z()) - c.half_height;
  const double inside = std::min(std::max(radial, axial), 0.0);
  const double outside = std::hypot(std::max(radial, 0.0), std::max(axial, 0.0));
  return inside + outside;
}

double cone_distance(const Vec3& p, const Cone& c) {
  // w = (distance from axis, height); the cone occupies z in [-height, 0].
  const Eigen::Vector2d w(std::hypot(p.x(), p.y()), p.z());
  const Eigen::Vector2d q(c.height * std::tan(c.half_angle), -c.height);
  const Eigen::Vector2d a = w - q * std::clamp(w.dot(q) / q.dot(q), 0.0, 1.0);
  const Eigen::Vector2d b =
      w - Eigen::Vector2d(q.x() * std::clamp(w.x() / q.x(), 0.0, 1.0), q.y());
  const double k = q.y() < 0.0 ? -1.0 : 1.0;
  const double d = std::min(a.dot(a), b.dot(b));
  const double s = std::max(k * (w.x() * q.y() - w.y() * q.x()), k * (w.y() - q.y()));
  return std::sqrt(d) * sign_of(s);
}

double local_field(const Shape& shape, const Vec3& p) {
  return std::visit(
      Overloaded{
          [&](const Sphere& s) { return s.radius - p.norm(); },
          [&](const Box& b) { return -box_distance(p, b.half_extents); },
          [&](const Cylinder& c) { return -cylinder_distance(p, c); },
          [&](const Cone& c) { return -cone_distance(p, c); },
          [&](const WarpedBox& w) {
            const double warp = w.amplitude * std::sin(w.frequency * p.x()) *
                                std::sin(w.frequency * p.y()) *
                                std::sin(w.frequency * p.z());
            return -box_distance(p, w.half_extents) + warp;
          },
      },
      shape);
}

Vec3 local_half_extents(const Shape& shape) {
  return std::visit(
      Overloaded{
          [](const Sphere& s) -> Vec3 { return Vec3::Constant(s.radius); },
          [](const Box& b) -> Vec3 { return b.half_extents; },
          [](const Cylinder& c) -> Vec3 { return {c.radius, c.radius, c.half_height}; },
          [](const Cone& c) -> Vec3 {
            const double base = c.height * std::tan(c.half_angle);
            return {base, base, 0.5 * c.height};
          },
          [](const WarpedBox& w) -> Vec3 {
            return w.half_extents.array() + std::abs(w.amplitude);
          },
      },
      shape);
}

// Center of the local bounding box; only the cone is off-origin.
Vec3 local_box_center(const Shape& shape) {
  if (const auto* cone = std::get_if<Cone>(&shape)) return {0.0, 0.0, -0.5 * cone->height};
  return Vec3::Zero();
}

void require_positive(double v, const char* what, int id) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError("primitive " + std::to_string(id) + ": " + what + " must be positive");
  }
}

}  // namespace

const char* to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Sphere: return "sphere";
    case PrimitiveKind::Box: return "box";
    case PrimitiveKind::Cylinder: return "cylinder";
    case PrimitiveKind::Cone: return "cone";
    case PrimitiveKind::WarpedBox: return "warped_box";
  }
  return "unknown";
}

void validate(const Primitive& p) {
  std::visit(Overloaded{
                 [&](const Sphere& s) { require_positive(s.radius, "radius", p.id); },
                 [&](const Box& b) {
                   for (int i = 0; i < 3; ++i) require_positive(b.half_extents[i], "half extent", p.id);
                 },
                 [&](const Cylinder& c) {
                   require_positive(c.radius, "radius", p.id);
                   require_positive(c.half_height, "half height", p.id);
                 },
                 [&](const Cone& c) {
                   require_positive(c.height, "height", p.id);
                   require_positive(c.half_angle, "half angle", p.id);
                   if (c.half_angle >= std::numbers::pi / 2) {
                     throw InputError("primitive " + std::to_string(p.id) +
                                      ": cone half angle must be below pi/2");
                   }
                 },
                 [&](const WarpedBox& w) {
                   for (int i = 0; i < 3; ++i) require_positive(w.half_extents[i], "half extent", p.id);
                   if (!std::isfinite(w.amplitude) || !std::isfinite(w.frequency)) {
                     throw InputError("primitive " + std::to_string(p.id) + ": non-finite warp");
                   }
                 },
             },
             p.shape);
  if (!p.pose.rotation.allFinite() || !p.pose.translation.allFinite()) {
    throw InputError("primitive " + std::to_string(p.id) + ": non-finite pose");
  }
  const Mat3 gram = p.pose.rotation.transpose() * p.pose.rotation;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw InputError("primitive " + std::to_string(p.id) + ": rotation is not orthonormal");
  }
}

void validate_primitive_set(std::span<const Primitive> primitives) {
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    validate(primitives[i]);
    if (primitives[i].id != static_cast<int>(i)) {
      throw InputError("primitive ids must be unique and contiguous from 0 (position " +
                       std::to_string(i) + " has id " + std::to_string(primitives[i].id) + ")");
    }
  }
}

const Primitive& find_primitive(std::span<const Primitive> primitives, int id) {
  if (id < 0 || static_cast<std::size_t>(id) >= primitives.size() ||
      primitives[static_cast<std::size_t>(id)].id != id) {
    throw InputError("unknown primitive id " + std::to_string(id));
  }
  return primitives[static_cast<std::size_t>(id)];
}

double eval_primitive(const Primitive& p, const Vec3& x) {
  return local_field(p.shape, p.pose.to_local(x));
}

std::optional<Vec3> analytic_gradient(const Primitive& p, const Vec3& x) {
  const Vec3 local = p.pose.to_local(x);
  std::optional<Vec3> g_local;
  if (std::holds_alternative<Sphere>(p.shape)) {
    const double n = local.norm();
    if (n == 0.0) return std::nullopt;
    g_local = -local / n;
  } else if (const auto* b = std::get_if<Box>(&p.shape)) {
    const Vec3 q = local.cwiseAbs() - b->half_extents;
    Vec3 d = Vec3::Zero();
    if ((q.array() <= 0.0).all()) {
      int axis = 0;
      q.maxCoeff(&axis);
      d[axis] = sign_of(local[axis]);
    } else {
      const Vec3 pos = q.cwiseMax(0.0);
      for (int i = 0; i < 3; ++i) d[i] = pos[i] * sign_of(local[i]);
      d /= pos.norm();
    }
    g_local = -d;
  } else if (const auto* c = std::get_if<Cylinder>(&p.shape)) {
    const double rho = std::hypot(local.x(), local.y());
    const double radial = rho - c->radius;
    const double axial = std::abs(local.z()) - c->half_height;
    const Vec3 u = rho > 0.0 ? Vec3(local.x() / rho, local.y() / rho, 0.0) : Vec3::Zero();
    const Vec3 up(0.0, 0.0, sign_of(local.z()));
    Vec3 d;
    if (radial <= 0.0 && axial <= 0.0) {
      d = radial > axial ? u : up;
    } else {
      const double a = std::max(radial, 0.0);
      const double b = std::max(axial, 0.0);
      d = (a * u + b * up) / std::hypot(a, b);
    }
    g_local = -d;
  } else {
    return std::nullopt;
  }
  return p.pose.rotation * *g_local;
}

double combine(BoolOp op, std::span<const double> values) {
  const std::size_t want = op == BoolOp::Complement ? 1 : 2;
  if (values.size() != want) {
    throw ContractViolation("combine: operator arity is " + std::to_string(want) + ", got " +
                            std::to_string(values.size()) + " values");
  }
  switch (op) {
    case BoolOp::Union: return unite(values[0], values[1]);
    case BoolOp::Intersection: return intersect(values[0], values[1]);
    case BoolOp::Difference: return subtract(values[0], values[1]);
    case BoolOp::Complement: return complement(values[0]);
  }
  return 0.0;
}

UnitGradient normalize_gradient(const Vec3& g) {
  const double n = g.norm();
  if (!(n >= kDegenerateGradientNorm)) return {};
  return {g / n, false};
}

Aabb primitive_aabb(const Primitive& p, double margin) {
  Aabb box;
  if (const auto* s = std::get_if<Sphere>(&p.shape)) {
    box = {p.pose.translation.array() - s->radius, p.pose.translation.array() + s->radius};
  } else {
    const Vec3 half = local_half_extents(p.shape);
    const Vec3 center = local_box_center(p.shape);
    box.min = Vec3::Constant(std::numeric_limits<double>::infinity());
    box.max = -box.min;
    for (int corner = 0; corner < 8; ++corner) {
      Vec3 local = center;
      for (int axis = 0; axis < 3; ++axis) {
        local[axis] += ((corner >> axis) & 1) ? half[axis] : -half[axis];
      }
      const Vec3 world = p.pose.to_world(local);
      box.min = box.min.cwiseMin(world);
      box.max = box.max.cwiseMax(world);
    }
  }
  return box.expanded(margin);
}

Aabb model_aabb(std::span<const Primitive> primitives) {
  if (primitives.empty()) throw ContractViolation("model_aabb: no primitives");
  Aabb box = primitive_aabb(primitives.front());
  for (const auto& p : primitives.subspan(1)) box = box.merged(primitive_aabb(p));
  return box;
}

Primitive transformed(const Primitive& p, double scale, const Vec3& offset) {
  Primitive out = p;
  out.pose.translation = scale * p.pose.translation + offset;
  std::visit(Overloaded{
                 [&](Sphere& s) { s.radius *= scale; },
                 [&](Box& b) { b.half_extents *= scale; },
                 [&](Cylinder& c) {
                   c.radius *= scale;
                   c.half_height *= scale;
                 },
                 [&](Cone& c) { c.height *= scale; },
                 [&](WarpedBox& w) {
                   w.half_extents *= scale;
                   w.amplitude *= scale;
                   w.frequency /= scale;
                 },
             },
             out.shape);
  return out;
}

}  // namespace csgpart
