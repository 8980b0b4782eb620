#include "csgpart/point_cloud.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "csgpart/errors.hpp"

namespace csgpart {

PointCloud read_point_cloud(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() != 7) {
      throw InputError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                       std::to_string(tokens.size()));
    }
    PointSample s;
    try {
      std::size_t used = 0;
      for (int k = 0; k < 6; ++k) {
        const double v = std::stod(tokens[static_cast<std::size_t>(k)], &used);
        if (used != tokens[static_cast<std::size_t>(k)].size() || !std::isfinite(v)) {
          throw std::invalid_argument("bad number");
        }
        (k < 3 ? s.position[k] : s.normal[k - 3]) = v;
      }
      const long label = std::stol(tokens[6], &used);
      if (used != tokens[6].size() || label < 0 || label > 0x7fffffffL) {
        throw std::invalid_argument("bad label");
      }
      s.label = static_cast<int>(label);
    } catch (const std::logic_error&) {
      throw InputError("line " + std::to_string(line_no) + ": malformed value");
    }
    if (std::abs(s.normal.norm() - 1.0) > 1e-6) {
      throw InputError("line " + std::to_string(line_no) + ": normal is not unit length");
    }
    cloud.push_back(s);
  }
  return cloud;
}

void write_point_cloud(std::ostream& out, std::span<const PointSample> cloud) {
  out << "# x y z nx ny nz label\n";
  char buf[512];
  for (const auto& s : cloud) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g %d\n", s.position.x(),
                  s.position.y(), s.position.z(), s.normal.x(), s.normal.y(), s.normal.z(),
                  s.label);
    out << buf;
  }
}

PointCloud load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open point cloud " + path.string());
  return read_point_cloud(in);
}

void save_point_cloud(const std::filesystem::path& path, std::span<const PointSample> cloud) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write point cloud " + path.string());
  write_point_cloud(out, cloud);
}

}  // namespace csgpart
