#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "csgpart/geometry.hpp"

namespace csgpart {

/// One segmented measurement: position, unit normal and generating primitive.
/// Normals follow the positive-inside field, so they point into the solid.
struct PointSample {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  int label = -1;
};

using PointCloud = std::vector<PointSample>;

/// Text format: one "x y z nx ny nz label" line per sample, whitespace
/// separated, '#' starts a comment, blank lines are skipped. Values are
/// written with 17 significant digits so a round trip is exact.
PointCloud read_point_cloud(std::istream& in);
void write_point_cloud(std::ostream& out, std::span<const PointSample> cloud);

PointCloud load_point_cloud(const std::filesystem::path& path);
void save_point_cloud(const std::filesystem::path& path, std::span<const PointSample> cloud);

}  // namespace csgpart
