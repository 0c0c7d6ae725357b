#pragma once

#include <functional>
#include <string>
#include <vector>

#include "commaware/dynamics.hpp"
#include "commaware/predict.hpp"
#include "commaware/types.hpp"

namespace commaware {

/// Discrete costates paired with the state grid: p1_k, p2_k for k = 0..N and
/// the constant bit costate p3. Backward recursion matches the Euler-discretized
/// cost exactly, so finite differences of J reproduce these to rounding error.
struct CostateTrajectory {
  std::vector<Vec2> p1;
  std::vector<Vec2> p2;
  double p3 = 0.0;
};

struct SolverParams {
  double alpha = 0.1;       // Armijo sufficient-decrease fraction
  double beta = 0.5;        // Armijo backtracking ratio
  int max_iters = 500;
  int armijo_cap = 50;      // largest backtracking exponent tried
  double theta_tol = 1e-9;  // stop when |theta| falls below this
  double eps_v = 1e-9;      // below this speed the |v| terms are treated as smooth

  void validate() const;
};

enum class TerminationReason {
  kThetaTolerance,
  kArmijoCapReached,
  kMaxIterations,
};

std::string to_string(TerminationReason r);

struct IterationRecord {
  int iter = 0;
  double J = 0.0;
  double J_bar = 0.0;
  double theta = 0.0;
  double lambda = 1.0;
  int armijo_j = 0;
};

struct Solution {
  ControlTrajectory ctrl;
  StateTrajectory traj;
  CostBreakdown cost;
  std::vector<IterationRecord> log;
  TerminationReason reason = TerminationReason::kMaxIterations;
  int iterations = 0;
};

/// Backward sweep for the current (ctrl, traj) pair.
CostateTrajectory integrate_costate(const StateTrajectory& traj,
                                    const ControlTrajectory& ctrl,
                                    const CostGrid& grid,
                                    const MotionWeights& w,
                                    const ProblemSpec& spec, double c_bar,
                                    double eps_v);

/// Gradient of the discrete cost in the controls; same layout as ctrl.
struct ControlGradient {
  std::vector<Vec2> du;
  std::vector<double> dR;
};

ControlGradient cost_gradient(const StateTrajectory& traj,
                              const ControlTrajectory& ctrl,
                              const CostateTrajectory& costate,
                              const MotionWeights& w, const ProblemSpec& spec);

/// argmin over |u| <= u_max of p2.u + gamma_m k1 |u|^2 (k5 = k6 = 0).
Vec2 pointwise_min_u(const Vec2& p2, const MotionWeights& w,
                     const ProblemSpec& spec);

/// argmin over 0 <= R <= r_max of p3 R + s (2^R - 1)/K.
double pointwise_min_R(double p3, double s, double comm_scale,
                       const ProblemSpec& spec);

/// theta = sum_k dt (H(u*_k, R*_k) - H(u_k, R_k)) <= 0, accumulated in
/// difference form so the matched terms cancel exactly.
double descent_measure(const StateTrajectory& traj,
                       const ControlTrajectory& ctrl,
                       const ControlTrajectory& target,
                       const CostateTrajectory& costate,
                       const MotionWeights& w, const ProblemSpec& spec);

struct ArmijoResult {
  double lambda = 1.0;
  int j = 0;
  bool accepted = false;  // false means the backtracking cap was exhausted
};

/// Smallest j <= cap with cost(ctrl + beta^j (target - ctrl)) - cost(ctrl)
/// <= alpha beta^j theta. cost_of evaluates J for candidate controls.
ArmijoResult armijo(
    const std::function<double(const ControlTrajectory&)>& cost_of,
    const ControlTrajectory& ctrl, const ControlTrajectory& target,
    double current_cost, double theta, const SolverParams& sp);

/// One full Hamiltonian-descent solve from the given initial controls.
Solution solve(const RobotState& x0, const ControlTrajectory& init,
               const CostGrid& grid, const MotionWeights& w,
               const ProblemSpec& spec, double c_bar, const SolverParams& sp);

}  // namespace commaware
