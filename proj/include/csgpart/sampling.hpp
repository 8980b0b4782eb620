#pragma once

#include <string>
#include <vector>

#include "csgpart/csg_tree.hpp"
#include "csgpart/point_cloud.hpp"

namespace csgpart {

struct GroundTruthModel {
  std::string name;
  std::vector<Primitive> primitives;
  CsgTree tree;
  std::vector<std::size_t> expected_histogram;   // partition sizes the model is built for
};

/// Synthetic stand-ins for the evaluation models, all inside [-1, 1]^3:
/// two-prim, warped, m1-analog, m2-analog, mixed-analog.
std::vector<GroundTruthModel> builtin_models();

/// Throws InputError for an unknown name.
GroundTruthModel builtin_model(const std::string& name);

struct SamplerOptions {
  double shell_width = 0.02;
  double surface_tolerance = 1e-4;
  int projection_steps = 64;
  std::size_t attempts_per_point = 200;
};

/// n noise-free surface samples: uniform draws in the model box, kept when
/// |f| <= shell_width and then projected onto the zero set by Newton steps
/// along the field gradient. Starting from a thin shell spreads samples by
/// surface area instead of collecting them on creases. Normals are the
/// normalized field gradient; labels are the primitive with the smallest |f_p|
/// (lower id on ties).
PointCloud sample_surface(const GroundTruthModel& model, std::size_t n, Rng& rng,
                          const SamplerOptions& options = {});

/// sample_surface followed by isotropic Gaussian displacement of std `sigma`.
PointCloud sample_model(const GroundTruthModel& model, std::size_t n, double sigma, Rng& rng,
                        const SamplerOptions& options = {});

/// Fraction of cell centers of an n^3 grid over `box` where both trees agree
/// on inside (f >= 0) versus outside.
double sign_agreement(const CsgTree& a, const CsgTree& b, std::span<const Primitive> primitives,
                      const Aabb& box, int n);

}  // namespace csgpart
