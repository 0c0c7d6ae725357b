#include "commaware/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "commaware/artifacts.hpp"
#include "commaware/parallel.hpp"

namespace commaware {

void ChannelParams::validate() const {
  if (!(n_pl > 0.0)) throw ConfigError("channel.n_pl must be positive");
  if (!(xi_db >= 0.0)) throw ConfigError("channel.xi_db must be non-negative");
  if (!(eta > 0.0)) throw ConfigError("channel.eta must be positive");
  if (!(rho_db >= 0.0)) throw ConfigError("channel.rho_db must be non-negative");
  if (!std::isfinite(k_pl)) throw ConfigError("channel.k_pl must be finite");
  if (!std::isfinite(noise_floor_dbm)) {
    throw ConfigError("channel.noise_floor_dbm must be finite");
  }
  if (!(ber_threshold > 0.0 && ber_threshold < 0.2)) {
    throw ConfigError("channel.ber_threshold must lie in (0, 0.2)");
  }
}

double ChannelParams::mqam_constant() const {
  return -1.5 / std::log(5.0 * ber_threshold);
}

void Workspace::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw ConfigError("workspace extents must be positive");
  }
  if (!contains(base_station)) {
    throw ConfigError("workspace.base_station must lie inside the workspace");
  }
}

bool Workspace::contains(const Vec2& q) const {
  return q.x() >= x_min && q.x() <= x_max && q.y() >= y_min && q.y() <= y_max;
}

Vec2 Workspace::clamp(const Vec2& q) const {
  return Vec2(std::clamp(q.x(), x_min, x_max), std::clamp(q.y(), y_min, y_max));
}

double path_loss_db(const ChannelParams& params, const Vec2& q, const Vec2& q_b,
                    double min_dist) {
  const double d = std::max((q - q_b).norm(), min_dist);
  return params.k_pl - 10.0 * params.n_pl * std::log10(d);
}

GroundTruthField generate_field(const ChannelParams& params,
                                const Workspace& ws, double resolution,
                                std::uint64_t seed, int node_cap) {
  params.validate();
  ws.validate();
  GroundTruthField field;
  field.workspace = ws;
  field.params = params;
  field.seed = seed;
  field.grid =
      ScalarGrid::make(ws.x_min, ws.y_min, ws.x_max, ws.y_max, resolution);
  const int n = field.grid.size();
  if (n > node_cap) {
    throw ConfigError("field grid has " + std::to_string(n) +
                      " nodes, above the cap of " + std::to_string(node_cap) +
                      "; coarsen the resolution or raise node_cap");
  }

  std::vector<double> xs(n), ys(n);
  for (int iy = 0; iy < field.grid.ny; ++iy) {
    for (int ix = 0; ix < field.grid.nx; ++ix) {
      const int i = field.grid.index(ix, iy);
      xs[i] = field.grid.node_x(ix);
      ys[i] = field.grid.node_y(iy);
    }
  }

  // One serial engine, shadowing draws first, keeps every field a pure
  // function of the seed.
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = unit(eng);

  Eigen::VectorXd shadow = Eigen::VectorXd::Zero(n);
  if (params.xi_db > 0.0) {
    const double xi2 = params.xi_db * params.xi_db;
    Eigen::MatrixXd cov =
        exponential_covariance(xs, ys, xi2, params.eta, 1e-10 * xi2);
    if (!cholesky_in_place(cov)) {
      throw NumericalError("channel", "shadowing covariance factorization failed");
    }
    shadow = lower_triangular_matvec(cov, z);
  }

  const double min_dist = 0.5 * resolution;
  for (int i = 0; i < n; ++i) {
    const double pl =
        path_loss_db(params, Vec2(xs[i], ys[i]), ws.base_station, min_dist);
    field.grid.values[i] = pl + shadow(i) + params.rho_db * unit(eng);
  }
  return field;
}

double true_cnr(const GroundTruthField& field, const Vec2& q) {
  if (!field.workspace.contains(q)) {
    throw ConfigError("true_cnr query lies outside the workspace");
  }
  return field.grid.bilinear(q);
}

void MeasurementSet::append(const MeasurementSet& more) {
  positions.insert(positions.end(), more.positions.begin(),
                   more.positions.end());
  values_db.insert(values_db.end(), more.values_db.begin(),
                   more.values_db.end());
}

void MeasurementSet::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "x,y,cnr_db\n";
  for (int i = 0; i < size(); ++i) {
    out << format_double(positions[i].x()) << ','
        << format_double(positions[i].y()) << ','
        << format_double(values_db[i]) << '\n';
  }
  if (!out) throw ConfigError("failed writing " + path);
}

MeasurementSet MeasurementSet::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,cnr_db") {
    throw ConfigError(path + ": expected header x,y,cnr_db");
  }
  MeasurementSet meas;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError(path + ": malformed number '" + cell + "'");
      }
    }
    if (row.size() != 3) {
      throw ConfigError(path + ": expected three columns per row");
    }
    meas.positions.emplace_back(row[0], row[1]);
    meas.values_db.push_back(row[2]);
  }
  return meas;
}

namespace {

MeasurementSet sample_impl(const GroundTruthField& field, int n,
                           std::uint64_t seed, const Vec2* center,
                           double radius) {
  if (n < 0) throw ConfigError("measurement count must be non-negative");
  const Workspace& ws = field.workspace;
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> ux(ws.x_min, ws.x_max);
  std::uniform_real_distribution<double> uy(ws.y_min, ws.y_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double keep_out = field.grid.resolution;
  MeasurementSet meas;
  meas.positions.reserve(n);
  meas.values_db.reserve(n);
  const Vec2 c = center ? ws.clamp(*center) : Vec2(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    Vec2 q;
    bool found = false;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      if (center) {
        const double ang = 2.0 * M_PI * unit(eng);
        const double rad = radius * std::sqrt(unit(eng));
        q = c + rad * Vec2(std::cos(ang), std::sin(ang));
        if (!ws.contains(q)) continue;
      } else {
        q = Vec2(ux(eng), uy(eng));
      }
      if ((q - ws.base_station).norm() < keep_out) continue;
      found = true;
      break;
    }
    if (!found) {
      throw NumericalError("channel", "measurement sampling failed to find an admissible position");
    }
    meas.positions.push_back(q);
    meas.values_db.push_back(true_cnr(field, q));
  }
  return meas;
}

}  // namespace

MeasurementSet sample_measurements(const GroundTruthField& field, int n,
                                   std::uint64_t seed) {
  return sample_impl(field, n, seed, nullptr, 0.0);
}

MeasurementSet sample_measurements_near(const GroundTruthField& field, int n,
                                        std::uint64_t seed, const Vec2& center,
                                        double radius) {
  if (!(radius > 0.0)) throw ConfigError("sample radius must be positive");
  return sample_impl(field, n, seed, &center, radius);
}

}  // namespace commaware
