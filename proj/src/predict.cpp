#include "commaware/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "commaware/parallel.hpp"

namespace commaware {

namespace {

constexpr double kChi = 0.23025850929940457;  // ln(10)/10

double log_distance_regressor(double d) { return -10.0 * std::log10(d); }

}  // namespace

PathLossFit fit_path_loss(const MeasurementSet& meas, const Vec2& q_b) {
  const int m = meas.size();
  if (m < 2) {
    throw ConfigError("path-loss fit needs at least two measurements");
  }
  Eigen::MatrixXd h(m, 2);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const double d = (meas.positions[i] - q_b).norm();
    if (!(d > 0.0)) {
      throw ConfigError("measurement coincides with the base station");
    }
    h(i, 0) = 1.0;
    h(i, 1) = log_distance_regressor(d);
    y(i) = meas.values_db[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(h);
  if (qr.rank() < 2) {
    throw ConfigError(
        "path-loss fit needs measurements at two distinct distances");
  }
  PathLossFit fit;
  fit.theta_hat = qr.solve(y);
  return fit;
}

double lognormal_inv_cnr(double mean_db, double variance,
                         double noise_floor_dbm) {
  return std::exp(0.5 * kChi * kChi * variance) *
         std::pow(10.0, -(mean_db - noise_floor_dbm) / 10.0);
}

Predictor::Predictor(MeasurementSet meas, const Vec2& q_b, double xi_hat,
                     double eta_hat, double rho_hat, double noise_floor_dbm)
    : meas_(std::move(meas)),
      q_b_(q_b),
      xi_hat_(xi_hat),
      eta_hat_(eta_hat),
      rho_hat_(rho_hat),
      noise_floor_dbm_(noise_floor_dbm) {
  if (!(xi_hat_ >= 0.0)) throw ConfigError("xi_hat must be non-negative");
  if (!(eta_hat_ > 0.0)) throw ConfigError("eta_hat must be positive");
  if (!(rho_hat_ >= 0.0)) throw ConfigError("rho_hat must be non-negative");
  if (!std::isfinite(noise_floor_dbm_)) {
    throw ConfigError("noise_floor_dbm must be finite");
  }
  fit_ = fit_path_loss(meas_, q_b_);

  const int m = meas_.size();
  if (rho_hat_ == 0.0) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        if ((meas_.positions[i] - meas_.positions[j]).squaredNorm() == 0.0) {
          throw ConfigError(
              "duplicate measurement positions require rho_hat > 0");
        }
      }
    }
  }
  std::vector<double> xs(m), ys(m);
  for (int i = 0; i < m; ++i) {
    xs[i] = meas_.positions[i].x();
    ys[i] = meas_.positions[i].y();
  }
  Eigen::MatrixXd phi = exponential_covariance_serial(
      xs, ys, xi_hat_ * xi_hat_, eta_hat_, rho_hat_ * rho_hat_);
  phi_llt_.compute(phi);
  if (phi_llt_.info() != Eigen::Success) {
    throw NumericalError("predict", "interpolation matrix factorization failed");
  }

  Eigen::VectorXd residual(m);
  for (int i = 0; i < m; ++i) {
    const double d = (meas_.positions[i] - q_b_).norm();
    residual(i) = meas_.values_db[i] - fit_.theta_hat(0) -
                  fit_.theta_hat(1) * log_distance_regressor(d);
  }
  weights_ = phi_llt_.solve(residual);
}

Eigen::VectorXd Predictor::psi(const Vec2& q) const {
  const int m = meas_.size();
  Eigen::VectorXd v(m);
  const double xi2 = xi_hat_ * xi_hat_;
  for (int i = 0; i < m; ++i) {
    v(i) = xi2 * std::exp(-(q - meas_.positions[i]).norm() / eta_hat_);
  }
  return v;
}

Posterior Predictor::posterior(const Vec2& q) const {
  const double d = (q - q_b_).norm();
  if (!(d > 0.0)) {
    throw ConfigError("posterior query coincides with the base station");
  }
  const Eigen::VectorXd corr = psi(q);
  Posterior post;
  post.mean_db = fit_.theta_hat(0) +
                 fit_.theta_hat(1) * log_distance_regressor(d) +
                 corr.dot(weights_);
  const double explained = corr.dot(phi_llt_.solve(corr));
  post.variance = std::max(0.0, prior_variance() - explained);
  return post;
}

double Predictor::expected_inv_cnr(const Vec2& q) const {
  const Posterior post = posterior(q);
  return lognormal_inv_cnr(post.mean_db, post.variance, noise_floor_dbm_);
}

namespace {

/// Fills every NaN-marked node from its nearest finite neighbor, appending a
/// note per fill. Grids must share their lattice.
void fill_singular_nodes(ScalarGrid& a, ScalarGrid& b,
                         std::vector<std::string>& notes) {
  for (int iy = 0; iy < a.ny; ++iy) {
    for (int ix = 0; ix < a.nx; ++ix) {
      if (!std::isnan(a.at(ix, iy))) continue;
      int best_ix = -1, best_iy = -1;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (int jy = 0; jy < a.ny; ++jy) {
        for (int jx = 0; jx < a.nx; ++jx) {
          if (std::isnan(a.at(jx, jy))) continue;
          const double dx = static_cast<double>(jx - ix);
          const double dy = static_cast<double>(jy - iy);
          const double d2 = dx * dx + dy * dy;
          if (d2 < best_d2) {
            best_d2 = d2;
            best_ix = jx;
            best_iy = jy;
          }
        }
      }
      if (best_ix < 0) {
        throw NumericalError("predict", "no finite node available to patch the base-station node");
      }
      a.at(ix, iy) = a.at(best_ix, best_iy);
      b.at(ix, iy) = b.at(best_ix, best_iy);
      notes.push_back("node (" + std::to_string(ix) + "," +
                      std::to_string(iy) +
                      ") coincides with the base station; value copied from "
                      "node (" +
                      std::to_string(best_ix) + "," + std::to_string(best_iy) +
                      ")");
    }
  }
}

PosteriorGrids posterior_grids_impl(const Predictor& pred, const Workspace& ws,
                                    double resolution, bool threaded) {
  PosteriorGrids out;
  out.mean_db =
      ScalarGrid::make(ws.x_min, ws.y_min, ws.x_max, ws.y_max, resolution);
  out.variance = out.mean_db;
  ScalarGrid& mean = out.mean_db;
  ScalarGrid& var = out.variance;
  const auto body = [&](int i) {
    const int ix = i % mean.nx;
    const int iy = i / mean.nx;
    const Vec2 q(mean.node_x(ix), mean.node_y(iy));
    if ((q - pred.base_station()).norm() <= 0.0) {
      mean.values[i] = std::numeric_limits<double>::quiet_NaN();
      var.values[i] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const Posterior post = pred.posterior(q);
    mean.values[i] = post.mean_db;
    var.values[i] = post.variance;
  };
  if (threaded) {
    parallel_for(mean.size(), body);
  } else {
    for (int i = 0; i < mean.size(); ++i) body(i);
  }
  fill_singular_nodes(mean, var, out.notes);
  return out;
}

}  // namespace

PosteriorGrids evaluate_posterior_grids(const Predictor& pred,
                                        const Workspace& ws,
                                        double resolution) {
  return posterior_grids_impl(pred, ws, resolution, true);
}

PosteriorGrids evaluate_posterior_grids_serial(const Predictor& pred,
                                               const Workspace& ws,
                                               double resolution) {
  return posterior_grids_impl(pred, ws, resolution, false);
}

namespace {

void central_difference_gradients(CostGrid& grid) {
  const ScalarGrid& s = grid.s;
  grid.ds_dx = s;
  grid.ds_dy = s;
  const double res = s.resolution;
  for (int iy = 0; iy < s.ny; ++iy) {
    for (int ix = 0; ix < s.nx; ++ix) {
      const int xl = std::max(ix - 1, 0);
      const int xr = std::min(ix + 1, s.nx - 1);
      grid.ds_dx.at(ix, iy) =
          (s.at(xr, iy) - s.at(xl, iy)) / ((xr - xl) * res);
      const int yl = std::max(iy - 1, 0);
      const int yr = std::min(iy + 1, s.ny - 1);
      grid.ds_dy.at(ix, iy) =
          (s.at(ix, yr) - s.at(ix, yl)) / ((yr - yl) * res);
    }
  }
}

}  // namespace

CostGrid cost_grid_from_posterior(const PosteriorGrids& post,
                                  double noise_floor_dbm) {
  CostGrid grid;
  grid.s = post.mean_db;
  grid.notes = post.notes;
  for (int i = 0; i < grid.s.size(); ++i) {
    grid.s.values[i] = lognormal_inv_cnr(
        post.mean_db.values[i], post.variance.values[i], noise_floor_dbm);
  }
  central_difference_gradients(grid);
  return grid;
}

CostGrid build_cost_grid(const Predictor& pred, const Workspace& ws,
                         double resolution) {
  return cost_grid_from_posterior(evaluate_posterior_grids(pred, ws, resolution),
                                  pred.noise_floor_dbm());
}

CostGrid build_cost_grid_from_values(const Workspace& ws, double resolution,
                                     const std::vector<double>& s_values) {
  CostGrid grid;
  grid.s = ScalarGrid::make(ws.x_min, ws.y_min, ws.x_max, ws.y_max, resolution);
  if (s_values.size() != grid.s.values.size()) {
    throw ConfigError("cost grid values do not match the lattice size");
  }
  for (double v : s_values) {
    if (!(v > 0.0)) {
      throw ConfigError("cost grid values must be strictly positive");
    }
  }
  grid.s.values = s_values;
  central_difference_gradients(grid);
  return grid;
}

CostSample s_and_grad(const CostGrid& grid, const Vec2& q) {
  CostSample sample;
  Vec2 p(std::clamp(q.x(), grid.s.x_min, grid.s.x_max()),
         std::clamp(q.y(), grid.s.y_min, grid.s.y_max()));
  sample.clamped = (p - q).squaredNorm() > 0.0;
  sample.s = grid.s.bilinear(p);
  sample.grad = Vec2(grid.ds_dx.bilinear(p), grid.ds_dy.bilinear(p));
  return sample;
}

}  // namespace commaware
