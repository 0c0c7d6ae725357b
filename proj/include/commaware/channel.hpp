#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commaware/grid.hpp"
#include "commaware/types.hpp"

namespace commaware {

/// Wireless channel model parameters. CNR in dB decomposes into
/// path loss k_pl - 10 n_pl log10(dist), spatially correlated shadowing
/// (std xi_db, exponential correlation length eta) and uncorrelated
/// multipath (std rho_db).
struct ChannelParams {
  double k_pl = -41.34;          // path-loss intercept at 1 m, dB
  double n_pl = 3.86;            // path-loss exponent
  double xi_db = 3.20;           // shadowing std, dB
  double eta = 3.09;             // shadowing decorrelation distance, m
  double rho_db = 1.64;          // multipath std, dB
  double noise_floor_dbm = -110.0;
  double ber_threshold = 2e-6;   // target bit error rate

  void validate() const;

  /// MQAM constant K = -1.5 / ln(5 * ber_threshold); positive for
  /// ber_threshold < 0.2.
  double mqam_constant() const;
};

struct Workspace {
  double x_min = 0.0;
  double x_max = 50.0;
  double y_min = 0.0;
  double y_max = 50.0;
  Vec2 base_station{5.0, 5.0};

  void validate() const;
  bool contains(const Vec2& q) const;
  Vec2 clamp(const Vec2& q) const;
};

/// Deterministic path loss component, dB. The distance is clamped below at
/// min_dist so a query at the base station itself stays finite.
double path_loss_db(const ChannelParams& params, const Vec2& q, const Vec2& q_b,
                    double min_dist = 1e-3);

/// Simulated CNR (dB) over the workspace; the "real world" the planner is
/// tested against.
struct GroundTruthField {
  ScalarGrid grid;
  Workspace workspace;
  ChannelParams params;
  std::uint64_t seed = 0;
};

struct MeasurementSet {
  std::vector<Vec2> positions;
  std::vector<double> values_db;

  int size() const { return static_cast<int>(positions.size()); }
  void append(const MeasurementSet& more);

  /// CSV with columns x,y,cnr_db.
  void save_csv(const std::string& path) const;
  static MeasurementSet load_csv(const std::string& path);
};

/// Synthesizes path loss + correlated shadowing + multipath on a regular
/// grid. The shadowing covariance xi^2 exp(-d/eta) between every node pair
/// is factorized densely, so the node count is capped.
GroundTruthField generate_field(const ChannelParams& params,
                                const Workspace& ws, double resolution,
                                std::uint64_t seed, int node_cap = 40000);

/// Bilinear lookup of the synthesized field, dB domain.
double true_cnr(const GroundTruthField& field, const Vec2& q);

/// n positions drawn uniformly over the workspace (excluding a one-resolution
/// disk around the base station), values read via true_cnr.
MeasurementSet sample_measurements(const GroundTruthField& field, int n,
                                   std::uint64_t seed);

/// Same, restricted to the intersection of the workspace with a disk around
/// `center`; used when online cycles gather samples near the robot.
MeasurementSet sample_measurements_near(const GroundTruthField& field, int n,
                                        std::uint64_t seed, const Vec2& center,
                                        double radius);

}  // namespace commaware
