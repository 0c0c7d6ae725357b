#pragma once

#include <vector>

#include "commaware/predict.hpp"
#include "commaware/types.hpp"

namespace commaware {

/// Motion power coefficients P_m = k1|u|^2 + k2|v|^2 + k3|v| + k4 + k5|u|
/// + k6|u||v|, plus the motion/communication balance gamma.
struct MotionWeights {
  double k1 = 1.0, k2 = 1.0, k3 = 1.0, k4 = 1.0, k5 = 0.0, k6 = 0.0;
  double gamma = 0.01;

  void validate() const;
};

/// Which side of the running cost carries gamma. The optimized objective
/// weighs motion by gamma; the alternative weighs communication instead.
enum class ObjectiveConvention {
  kCommPlusGammaMotion,  // integrand P_c + gamma*P_m
  kMotionPlusGammaComm,  // integrand P_m + gamma*P_c
};

struct ProblemSpec {
  Vec2 source{20.0, 40.0};
  Vec2 destination{10.0, 5.0};
  double t_f = 40.0;
  double dt = 0.1;
  double c = 150.0;        // bits/Hz to transmit, Q/B
  double u_max = 0.5;      // m/s^2
  double r_max = 6.0;      // bits/s/Hz
  double c1 = 10.0, c2 = 50.0, c3 = 10.0;  // terminal penalties
  double mqam_k = 0.13028834457097555;     // from ber 2e-6
  ObjectiveConvention objective = ObjectiveConvention::kCommPlusGammaMotion;

  void validate() const;
  int steps(double t0 = 0.0) const;  // (t_f - t0)/dt, validated integral

  double comm_scale(double gamma) const {
    return objective == ObjectiveConvention::kCommPlusGammaMotion ? 1.0 : gamma;
  }
  double motion_scale(double gamma) const {
    return objective == ObjectiveConvention::kCommPlusGammaMotion ? gamma : 1.0;
  }
};

struct RobotState {
  Vec2 x1{0.0, 0.0};  // position, m
  Vec2 x2{0.0, 0.0};  // velocity, m/s
  double x3 = 0.0;    // transmitted bits/Hz
};

/// Piecewise-constant controls on a uniform time grid starting at t0:
/// acceleration u_k and spectral efficiency R_k for k = 0..N-1.
struct ControlTrajectory {
  std::vector<Vec2> u;
  std::vector<double> R;
  double dt = 0.1;
  double t0 = 0.0;

  int steps() const { return static_cast<int>(u.size()); }
  static ControlTrajectory zeros(int n, double dt, double t0 = 0.0);
  /// Max feasibility violation against |u| <= u_max, 0 <= R <= r_max.
  double feasibility_violation(double u_max, double r_max) const;
};

/// N+1 states on the control time grid plus s(x1_k) at every index.
struct StateTrajectory {
  std::vector<RobotState> states;
  std::vector<double> s;
  double dt = 0.1;
  double t0 = 0.0;
  int clamp_events = 0;  // forward-pass positions that left the workspace

  int steps() const { return static_cast<int>(states.size()) - 1; }
};

double motion_power(const Vec2& u, const Vec2& v, const MotionWeights& w);

/// (2^R - 1)/K * s; zero at R = 0, convex increasing in R.
double comm_power(double R, double s, double K);

/// Explicit Euler: x1 <- x1 + dt x2, x2 <- x2 + dt u, x3 <- x3 + dt R,
/// with s sampled from the cost grid at every state.
StateTrajectory integrate_forward(const RobotState& x0,
                                  const ControlTrajectory& ctrl,
                                  const CostGrid& grid);

struct CostBreakdown {
  double J = 0.0;
  double J_bar = 0.0;             // running energy, left-endpoint rectangle rule
  double terminal_penalty = 0.0;  // C1|x1_N - D|^2 + C2|x2_N|^2 + C3(x3_N - c_bar)^2
};

CostBreakdown total_cost(const StateTrajectory& traj,
                         const ControlTrajectory& ctrl, const MotionWeights& w,
                         const ProblemSpec& spec, double c_bar);

}  // namespace commaware
