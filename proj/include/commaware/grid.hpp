#pragma once

#include <string>
#include <vector>

#include "commaware/types.hpp"

namespace commaware {

/// Regular lattice of scalar values over a rectangle, node spacing
/// `resolution` in both axes. Node (ix, iy) sits at
/// (x_min + ix*resolution, y_min + iy*resolution); storage is row-major in y
/// (one x-row per y level), matching the CSV layout.
struct ScalarGrid {
  double x_min = 0.0;
  double y_min = 0.0;
  double resolution = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  static ScalarGrid make(double x_min, double y_min, double x_max, double y_max,
                         double resolution);

  int size() const { return nx * ny; }
  int index(int ix, int iy) const { return iy * nx + ix; }
  double& at(int ix, int iy) { return values[index(ix, iy)]; }
  double at(int ix, int iy) const { return values[index(ix, iy)]; }
  double node_x(int ix) const { return x_min + ix * resolution; }
  double node_y(int iy) const { return y_min + iy * resolution; }
  double x_max() const { return node_x(nx - 1); }
  double y_max() const { return node_y(ny - 1); }

  bool covers(const Vec2& q) const;

  /// Bilinear interpolation of the four nodes surrounding q. q must lie
  /// within the node extents.
  double bilinear(const Vec2& q) const;

  /// CSV round trip. First row: x_min,x_max,y_min,y_max,resolution; then one
  /// row of values per y level. Doubles are printed with full precision so a
  /// save/load cycle is exact.
  void save_csv(const std::string& path) const;
  static ScalarGrid load_csv(const std::string& path);
};

}  // namespace commaware
