#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "commaware/channel.hpp"

namespace commaware {

/// theta_hat = [K_pl_hat (dB), n_pl_hat] from ordinary least squares of the
/// measured dB values on [1, -10 log10(dist)].
struct PathLossFit {
  Eigen::Vector2d theta_hat{0.0, 0.0};
};

PathLossFit fit_path_loss(const MeasurementSet& meas, const Vec2& q_b);

/// E[1/CNR_linear] for a lognormal dB posterior:
/// exp((ln10/10)^2 variance/2) * 10^(-(mean_db - noise_floor_dbm)/10).
double lognormal_inv_cnr(double mean_db, double variance,
                         double noise_floor_dbm = 0.0);

struct Posterior {
  double mean_db = 0.0;
  double variance = 0.0;  // dB^2, clamped at 0
};

/// Kriging predictor of the dB channel: posterior mean/variance at any
/// query point from m measurements. Immutable after construction; queries
/// are read-only and safe to run concurrently.
class Predictor {
 public:
  /// Assembles Phi = Omega + rho_hat^2 I (Omega_ij = xi_hat^2
  /// exp(-|q_i-q_j|/eta_hat)), factorizes it and precomputes the residual
  /// weights Phi^{-1}(Y - H theta_hat). noise_floor_dbm shifts the dB->linear
  /// conversion in expected_inv_cnr; the posterior itself is unaffected.
  Predictor(MeasurementSet meas, const Vec2& q_b, double xi_hat,
            double eta_hat, double rho_hat, double noise_floor_dbm = 0.0);

  const MeasurementSet& measurements() const { return meas_; }
  const Vec2& base_station() const { return q_b_; }
  const PathLossFit& path_loss() const { return fit_; }
  double xi_hat() const { return xi_hat_; }
  double eta_hat() const { return eta_hat_; }
  double rho_hat() const { return rho_hat_; }
  double noise_floor_dbm() const { return noise_floor_dbm_; }
  double prior_variance() const { return xi_hat_ * xi_hat_ + rho_hat_ * rho_hat_; }
  const Eigen::VectorXd& residual_weights() const { return weights_; }

  /// Posterior mean (dB) and variance (dB^2) at q. q must differ from the
  /// base station (log-distance singularity).
  Posterior posterior(const Vec2& q) const;

  /// s(q) = E[1/CNR_linear] under the lognormal posterior,
  /// exp((ln10/10)^2 var/2) * 10^(-(mean_db - noise_floor_dbm)/10).
  double expected_inv_cnr(const Vec2& q) const;

  /// Correlation vector Psi(q) against the measurement sites.
  Eigen::VectorXd psi(const Vec2& q) const;

 private:
  MeasurementSet meas_;
  Vec2 q_b_;
  PathLossFit fit_;
  double xi_hat_, eta_hat_, rho_hat_, noise_floor_dbm_;
  Eigen::LLT<Eigen::MatrixXd> phi_llt_;
  Eigen::VectorXd weights_;  // Phi^{-1} (Y - H theta_hat)
};

/// Precomputed s field with central-difference gradients, all on one grid.
/// s is strictly positive; gradients are per meter.
struct CostGrid {
  ScalarGrid s;
  ScalarGrid ds_dx;
  ScalarGrid ds_dy;
  /// Nodes that coincided with the base station and were filled from their
  /// nearest non-singular neighbor.
  std::vector<std::string> notes;
};

struct CostSample {
  double s = 0.0;
  Vec2 grad{0.0, 0.0};
  bool clamped = false;  // query fell outside the workspace
};

/// Posterior mean and variance evaluated at every grid node (OpenMP kernel;
/// a node at the base station is filled from its nearest neighbor and
/// reported in `notes`).
struct PosteriorGrids {
  ScalarGrid mean_db;
  ScalarGrid variance;
  std::vector<std::string> notes;
};
PosteriorGrids evaluate_posterior_grids(const Predictor& pred,
                                        const Workspace& ws,
                                        double resolution);
PosteriorGrids evaluate_posterior_grids_serial(const Predictor& pred,
                                               const Workspace& ws,
                                               double resolution);

CostGrid build_cost_grid(const Predictor& pred, const Workspace& ws,
                         double resolution);

/// Transform already-evaluated posterior grids into the s cost grid.
CostGrid cost_grid_from_posterior(const PosteriorGrids& post,
                                  double noise_floor_dbm);

/// Builds a CostGrid directly from externally supplied s values (row-major
/// over the same lattice). Gradients are formed the same way as in
/// build_cost_grid. Intended for tests with mocked fields.
CostGrid build_cost_grid_from_values(const Workspace& ws, double resolution,
                                     const std::vector<double>& s_values);

/// Bilinear s and gradient at q; out-of-grid queries are clamped to the
/// boundary and flagged.
CostSample s_and_grad(const CostGrid& grid, const Vec2& q);

}  // namespace commaware
