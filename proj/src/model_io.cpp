#include "csgpart/model_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "csgpart/errors.hpp"

namespace csgpart {

namespace {

using nlohmann::json;

Vec3 vec3_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw InputError(std::string(what) + ": expected an array of 3 numbers");
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw InputError(std::string(what) + ": expected an array of 3 numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

json vec3_to(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

double number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw InputError(std::string("primitive field '") + key + "' must be a number");
  }
  return it->get<double>();
}

Vec3 vector_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("primitive field '") + key + "' is missing");
  return vec3_from(*it, key);
}

Pose pose_from(const json& j) {
  Pose pose;
  const auto it = j.find("pose");
  if (it == j.end()) return pose;
  if (!it->is_object()) throw InputError("'pose' must be an object");
  if (const auto r = it->find("rotation"); r != it->end()) {
    if (!r->is_array() || r->size() != 3) throw InputError("rotation: expected 3 rows");
    for (int row = 0; row < 3; ++row) pose.rotation.row(row) = vec3_from((*r)[row], "rotation row").transpose();
  }
  if (const auto t = it->find("translation"); t != it->end()) pose.translation = vec3_from(*t, "translation");
  return pose;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

json primitive_to_json(const Primitive& p) {
  json j = {{"id", p.id}, {"kind", to_string(p.kind())}};
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Sphere>) {
          j["radius"] = s.radius;
        } else if constexpr (std::is_same_v<S, Box>) {
          j["half_extents"] = vec3_to(s.half_extents);
        } else if constexpr (std::is_same_v<S, Cylinder>) {
          j["radius"] = s.radius;
          j["half_height"] = s.half_height;
        } else if constexpr (std::is_same_v<S, Cone>) {
          j["half_angle"] = s.half_angle;
          j["height"] = s.height;
        } else {
          j["half_extents"] = vec3_to(s.half_extents);
          j["amplitude"] = s.amplitude;
          j["frequency"] = s.frequency;
        }
      },
      p.shape);
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(vec3_to(p.pose.rotation.row(r).transpose()));
  j["pose"] = {{"rotation", rows}, {"translation", vec3_to(p.pose.translation)}};
  return j;
}

Primitive primitive_from_json(const json& j) {
  if (!j.is_object()) throw InputError("primitive entry must be an object");
  const auto id = j.find("id");
  if (id == j.end() || !id->is_number_integer()) throw InputError("primitive field 'id' must be an integer");
  const auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) throw InputError("primitive field 'kind' must be a string");

  Primitive p;
  p.id = id->get<int>();
  p.pose = pose_from(j);
  const std::string k = kind->get<std::string>();
  if (k == "sphere") {
    p.shape = Sphere{number(j, "radius")};
  } else if (k == "box") {
    p.shape = Box{vector_field(j, "half_extents")};
  } else if (k == "cylinder") {
    p.shape = Cylinder{number(j, "radius"), number(j, "half_height")};
  } else if (k == "cone") {
    p.shape = Cone{number(j, "half_angle"), number(j, "height")};
  } else if (k == "warped_box") {
    p.shape = WarpedBox{vector_field(j, "half_extents"), number(j, "amplitude"), number(j, "frequency")};
  } else {
    throw InputError("unknown primitive kind '" + k + "'");
  }
  validate(p);
  return p;
}

std::vector<Primitive> read_primitives(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("primitive file: ") + e.what());
  }
  const auto list = doc.find("primitives");
  if (!doc.is_object() || list == doc.end() || !list->is_array()) {
    throw InputError("primitive file: expected an object with a 'primitives' array");
  }
  std::vector<Primitive> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    try {
      out.push_back(primitive_from_json((*list)[i]));
    } catch (const InputError& e) {
      throw InputError("primitive #" + std::to_string(i) + ": " + e.what());
    }
  }
  validate_primitive_set(out);
  return out;
}

void write_primitives(std::ostream& out, std::span<const Primitive> primitives) {
  json list = json::array();
  for (const auto& p : primitives) list.push_back(primitive_to_json(p));
  out << json{{"primitives", list}}.dump(2) << '\n';
}

std::vector<Primitive> load_primitives(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_primitives(in);
}

void save_primitives(const std::filesystem::path& path, std::span<const Primitive> primitives) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_primitives(out, primitives);
}

CsgTree load_tree(const std::filesystem::path& path) { return parse(read_all(path)); }

void save_tree(const std::filesystem::path& path, const CsgTree& tree) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << serialize(tree) << '\n';
}

}  // namespace csgpart
