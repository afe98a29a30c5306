#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mgmpcg/fem.hpp"

namespace mgmpcg {

struct Segment {
  double x1, y1, x2, y2;
};

/// Equidimensional fracture network: every segment is thickened to a band
/// of width `thickness` carrying permeability k_f; the rest is matrix k_m.
struct FractureNetwork {
  std::vector<Segment> segments;
  double thickness = 1e-4;
  double k_f = 1.0;
  double k_m = 1.0;

  void validate() const;
};

/// Parses {"k_m":..,"k_f":..,"delta":..,"segments":[[x1,y1,x2,y2],...]}.
FractureNetwork parse_fracture_network(const std::string& json_text);
FractureNetwork load_fracture_network(const std::filesystem::path& path);
std::string to_json(const FractureNetwork& net);

double point_segment_distance(double px, double py, const Segment& s);

/// An element is fractured iff its center lies within thickness/2 of a
/// segment.
DiffusionField rasterize_fractures(const StructuredGrid& grid, const FractureNetwork& net);

}  // namespace mgmpcg
