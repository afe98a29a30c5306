#include "mgmpcg/fractures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace mgmpcg {

void FractureNetwork::validate() const {
  require(thickness > 0.0, ErrorCode::invalid_argument, "fracture network: delta must be > 0");
  require(k_f > 0.0 && k_m > 0.0, ErrorCode::invalid_argument,
          "fracture network: k_f and k_m must be > 0");
  auto inside = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (const auto& s : segments) {
    require(inside(s.x1) && inside(s.y1) && inside(s.x2) && inside(s.y2),
            ErrorCode::invalid_argument, "fracture network: segment endpoint outside [0,1]^2");
  }
}

FractureNetwork parse_fracture_network(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("fracture network: invalid JSON: ") + e.what());
  }
  FractureNetwork net;
  try {
    net.k_m = j.at("k_m").get<double>();
    net.k_f = j.at("k_f").get<double>();
    net.thickness = j.at("delta").get<double>();
    for (const auto& s : j.at("segments")) {
      require(s.is_array() && s.size() == 4, ErrorCode::config,
              "fracture network: each segment must be [x1,y1,x2,y2]");
      net.segments.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>(),
                              s[3].get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("fracture network: ") + e.what());
  }
  net.validate();
  return net;
}

FractureNetwork load_fracture_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io, "cannot open network file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fracture_network(ss.str());
}

std::string to_json(const FractureNetwork& net) {
  nlohmann::json j;
  j["k_m"] = net.k_m;
  j["k_f"] = net.k_f;
  j["delta"] = net.thickness;
  j["segments"] = nlohmann::json::array();
  for (const auto& s : net.segments) j["segments"].push_back({s.x1, s.y1, s.x2, s.y2});
  return j.dump();
}

double point_segment_distance(double px, double py, const Segment& s) {
  const double dx = s.x2 - s.x1;
  const double dy = s.y2 - s.y1;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - s.x1) * dx + (py - s.y1) * dy) / len2, 0.0, 1.0);
  return std::hypot(px - (s.x1 + t * dx), py - (s.y1 + t * dy));
}

DiffusionField rasterize_fractures(const StructuredGrid& grid, const FractureNetwork& net) {
  net.validate();
  DiffusionField field = DiffusionField::uniform(grid, net.k_m, net.k_m);
  const double half = 0.5 * net.thickness;
  for (Index j = 0; j < grid.ny; ++j) {
    const double cy = (static_cast<double>(j) + 0.5) * grid.hy();
    for (Index i = 0; i < grid.nx; ++i) {
      const double cx = (static_cast<double>(i) + 0.5) * grid.hx();
      for (const auto& s : net.segments) {
        if (point_segment_distance(cx, cy, s) <= half) {
          field.kxx[grid.element(i, j)] = net.k_f;
          field.kyy[grid.element(i, j)] = net.k_f;
          break;
        }
      }
    }
  }
  return field;
}

}  // namespace mgmpcg
