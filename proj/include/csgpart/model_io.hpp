#pragma once

// JSON primitive files and prefix-form tree files.
//
//   {"primitives": [
//     {"id": 0, "kind": "box", "half_extents": [0.6, 0.6, 0.6],
//      "pose": {"rotation": [[1,0,0],[0,1,0],[0,0,1]], "translation": [0,0,0]}},
//     {"id": 1, "kind": "sphere", "radius": 0.45, "pose": {"translation": [0.5,0.5,0.5]}}
//   ]}
//
// "pose" and both of its members are optional (identity by default).

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"

#include "csgpart/csg_tree.hpp"

namespace csgpart {

nlohmann::json primitive_to_json(const Primitive& p);
/// Throws InputError on a missing or ill-typed field or an unknown kind, and
/// on parameters rejected by validate().
Primitive primitive_from_json(const nlohmann::json& j);

std::vector<Primitive> read_primitives(std::istream& in);
void write_primitives(std::ostream& out, std::span<const Primitive> primitives);
std::vector<Primitive> load_primitives(const std::filesystem::path& path);
void save_primitives(const std::filesystem::path& path, std::span<const Primitive> primitives);

/// Whole file is one prefix expression; surrounding whitespace is ignored.
CsgTree load_tree(const std::filesystem::path& path);
void save_tree(const std::filesystem::path& path, const CsgTree& tree);

}  // namespace csgpart
