#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commaware/dynamics.hpp"
#include "commaware/solver.hpp"
#include "commaware/types.hpp"

namespace commaware {

/// All floating-point output goes through this so reruns are byte-identical.
std::string format_double(double v);

/// Metadata block "seed,t0,J,J_bar" + values, then one row per time index
/// with columns t,x,y,vx,vy,x3,ux,uy,R,s,P_m,P_c. The terminal row repeats
/// the final state with zero controls so the cost is recomputable from the
/// file alone.
void write_trajectory_csv(const std::string& path, std::uint64_t seed,
                          const StateTrajectory& traj,
                          const ControlTrajectory& ctrl,
                          const CostBreakdown& cost, const MotionWeights& w,
                          const ProblemSpec& spec);

struct TrajectoryFile {
  std::uint64_t seed = 0;
  double t0 = 0.0;
  double J = 0.0;
  double J_bar = 0.0;
  StateTrajectory traj;  // states and s; dt inferred from the time column
  ControlTrajectory ctrl;
};

TrajectoryFile read_trajectory_csv(const std::string& path);

void write_iteration_log_csv(const std::string& path,
                             const std::vector<IterationRecord>& log);

void ensure_directory(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace commaware
