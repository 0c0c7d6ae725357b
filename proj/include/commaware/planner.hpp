#pragma once

#include <cstdint>
#include <vector>

#include "commaware/channel.hpp"
#include "commaware/dynamics.hpp"
#include "commaware/predict.hpp"
#include "commaware/solver.hpp"
#include "commaware/types.hpp"

namespace commaware {

struct PredictorParams {
  double xi_hat = 3.20;
  double eta_hat = 3.09;
  double rho_hat = 1.64;
  double noise_floor_dbm = -110.0;

  void validate() const;
};

struct OfflinePlan {
  Solution solution;
  CostGrid cost_grid;
  PathLossFit fit;
};

/// Fit the predictor to the measurements, rasterize s over the workspace,
/// and run the descent solver from rest at the source.
OfflinePlan plan_offline(const MeasurementSet& meas, const Workspace& ws,
                         double resolution, const PredictorParams& pp,
                         const MotionWeights& w, const ProblemSpec& spec,
                         const SolverParams& sp);

struct OnlineParams {
  std::vector<double> replan_times{0.0, 10.0, 20.0, 30.0};
  int samples_per_cycle = 100;
  /// Off: per-cycle samples are uniform over the workspace. On: restricted
  /// to a disk of sample_radius around the robot's current position.
  bool sample_near_robot = false;
  double sample_radius = 10.0;

  void validate(const ProblemSpec& spec) const;
};

struct OnlineCycle {
  double t0 = 0.0;
  double c_bar = 0.0;  // bits still owed at the start of the cycle
  Solution solution;
  CostGrid cost_grid;
  PathLossFit fit;
  int executed_steps = 0;  // prefix of solution.ctrl actually flown
  int measurements_used = 0;
};

struct OnlineResult {
  std::vector<OnlineCycle> cycles;
  /// The flown trajectory: per-cycle executed prefixes stitched with exact
  /// state handoff, x3 accumulated across cycles.
  ControlTrajectory executed_ctrl;
  StateTrajectory executed_traj;  // s from each cycle's own cost grid
  CostBreakdown executed_cost;    // J_bar of the flown path plus terminal terms
};

/// Receding-horizon replanning: at each replan time refit the predictor with
/// all measurements gathered so far, re-solve to t_f for the remaining bits,
/// warm-started from the tail of the previous plan, then fly one segment.
OnlineResult plan_online(const GroundTruthField& field,
                         const MeasurementSet& initial_meas,
                         double resolution, const PredictorParams& pp,
                         const MotionWeights& w, const ProblemSpec& spec,
                         const SolverParams& sp, const OnlineParams& op,
                         std::uint64_t seed);

}  // namespace commaware
