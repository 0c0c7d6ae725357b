#include "commaware/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "commaware/artifacts.hpp"

namespace commaware {

namespace {

int span_to_count(double lo, double hi, double resolution, const char* axis) {
  if (!(resolution > 0.0)) {
    throw ConfigError("grid resolution must be positive");
  }
  if (!(hi > lo)) {
    throw ConfigError(std::string("grid ") + axis + " extent must be positive");
  }
  const double steps = (hi - lo) / resolution;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-6 * std::max(1.0, steps)) {
    throw ConfigError(std::string("grid ") + axis +
                      " extent is not a multiple of the resolution");
  }
  return static_cast<int>(rounded) + 1;
}

}  // namespace

ScalarGrid ScalarGrid::make(double x_min, double y_min, double x_max,
                            double y_max, double resolution) {
  ScalarGrid g;
  g.x_min = x_min;
  g.y_min = y_min;
  g.resolution = resolution;
  g.nx = span_to_count(x_min, x_max, resolution, "x");
  g.ny = span_to_count(y_min, y_max, resolution, "y");
  g.values.assign(static_cast<size_t>(g.nx) * g.ny, 0.0);
  return g;
}

bool ScalarGrid::covers(const Vec2& q) const {
  return q.x() >= x_min && q.x() <= x_max() && q.y() >= y_min &&
         q.y() <= y_max();
}

double ScalarGrid::bilinear(const Vec2& q) const {
  const double fx = (q.x() - x_min) / resolution;
  const double fy = (q.y() - y_min) / resolution;
  int ix = static_cast<int>(std::floor(fx));
  int iy = static_cast<int>(std::floor(fy));
  ix = std::clamp(ix, 0, nx - 2);
  iy = std::clamp(iy, 0, ny - 2);
  const double tx = std::clamp(fx - ix, 0.0, 1.0);
  const double ty = std::clamp(fy - iy, 0.0, 1.0);
  const double v00 = at(ix, iy);
  const double v10 = at(ix + 1, iy);
  const double v01 = at(ix, iy + 1);
  const double v11 = at(ix + 1, iy + 1);
  const double bottom = v00 + tx * (v10 - v00);
  const double top = v01 + tx * (v11 - v01);
  return bottom + ty * (top - bottom);
}

void ScalarGrid::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open " + path + " for writing");
  }
  out << format_double(x_min) << ',' << format_double(x_max()) << ','
      << format_double(y_min) << ',' << format_double(y_max()) << ','
      << format_double(resolution) << '\n';
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (ix) out << ',';
      out << format_double(at(ix, iy));
    }
    out << '\n';
  }
  if (!out) {
    throw ConfigError("failed writing " + path);
  }
}

namespace {

std::vector<double> parse_row(const std::string& line, const std::string& path) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &pos);
    } catch (const std::exception&) {
      throw ConfigError(path + ": malformed number '" + cell + "'");
    }
    if (pos != cell.size()) {
      throw ConfigError(path + ": malformed number '" + cell + "'");
    }
    row.push_back(v);
  }
  return row;
}

}  // namespace

ScalarGrid ScalarGrid::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path + ": empty file");
  }
  const std::vector<double> header = parse_row(line, path);
  if (header.size() != 5) {
    throw ConfigError(path + ": header must be x_min,x_max,y_min,y_max,resolution");
  }
  ScalarGrid g = make(header[0], header[2], header[1], header[3], header[4]);
  int iy = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (iy >= g.ny) {
      throw ConfigError(path + ": more rows than the header implies");
    }
    const std::vector<double> row = parse_row(line, path);
    if (static_cast<int>(row.size()) != g.nx) {
      throw ConfigError(path + ": row width does not match the header");
    }
    std::copy(row.begin(), row.end(), g.values.begin() + g.index(0, iy));
    ++iy;
  }
  if (iy != g.ny) {
    throw ConfigError(path + ": fewer rows than the header implies");
  }
  return g;
}

}  // namespace commaware
