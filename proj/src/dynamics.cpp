#include "commaware/dynamics.hpp"

#include <cmath>

namespace commaware {

void MotionWeights::validate() const {
  if (!(k1 > 0.0)) throw ConfigError("weights.k1 must be positive");
  if (!(k2 >= 0.0) || !(k3 >= 0.0) || !(k4 >= 0.0) || !(k5 >= 0.0) ||
      !(k6 >= 0.0)) {
    throw ConfigError("weights.k2..k6 must be non-negative");
  }
  if (!(gamma > 0.0)) throw ConfigError("weights.gamma must be positive");
}

void ProblemSpec::validate() const {
  if (!(t_f > 0.0)) throw ConfigError("problem.t_f must be positive");
  if (!(dt > 0.0)) throw ConfigError("problem.dt must be positive");
  steps(0.0);
  if (!(c >= 0.0)) throw ConfigError("problem.c must be non-negative");
  if (!(u_max > 0.0)) throw ConfigError("problem.u_max must be positive");
  if (!(r_max > 0.0)) throw ConfigError("problem.r_max must be positive");
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || !(c3 >= 0.0)) {
    throw ConfigError("problem.c1..c3 must be non-negative");
  }
  if (!(mqam_k > 0.0)) throw ConfigError("problem.mqam_k must be positive");
  if (!source.allFinite() || !destination.allFinite()) {
    throw ConfigError("problem.source and problem.destination must be finite");
  }
}

int ProblemSpec::steps(double t0) const {
  const double span = t_f - t0;
  if (!(span > 0.0)) {
    throw ConfigError("problem horizon must be positive");
  }
  const double n = span / dt;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-6 * std::max(1.0, n) || rounded < 1.0) {
    throw ConfigError("problem horizon must be a positive multiple of dt");
  }
  return static_cast<int>(rounded);
}

ControlTrajectory ControlTrajectory::zeros(int n, double dt, double t0) {
  ControlTrajectory ctrl;
  ctrl.u.assign(n, Vec2::Zero());
  ctrl.R.assign(n, 0.0);
  ctrl.dt = dt;
  ctrl.t0 = t0;
  return ctrl;
}

double ControlTrajectory::feasibility_violation(double u_max,
                                                double r_max) const {
  double worst = 0.0;
  for (const Vec2& a : u) {
    worst = std::max(worst, a.norm() - u_max);
  }
  for (double r : R) {
    worst = std::max(worst, std::max(r - r_max, -r));
  }
  return std::max(worst, 0.0);
}

double motion_power(const Vec2& u, const Vec2& v, const MotionWeights& w) {
  const double un = u.norm();
  const double vn = v.norm();
  return w.k1 * un * un + w.k2 * vn * vn + w.k3 * vn + w.k4 + w.k5 * un +
         w.k6 * un * vn;
}

double comm_power(double R, double s, double K) {
  return (std::exp2(R) - 1.0) / K * s;
}

StateTrajectory integrate_forward(const RobotState& x0,
                                  const ControlTrajectory& ctrl,
                                  const CostGrid& grid) {
  const int n = ctrl.steps();
  StateTrajectory traj;
  traj.dt = ctrl.dt;
  traj.t0 = ctrl.t0;
  traj.states.resize(n + 1);
  traj.s.resize(n + 1);
  traj.states[0] = x0;
  for (int k = 0; k <= n; ++k) {
    const RobotState& x = traj.states[k];
    if (!x.x1.allFinite() || !x.x2.allFinite() || !std::isfinite(x.x3)) {
      throw NumericalError("dynamics",
                           "state non-finite at step " + std::to_string(k));
    }
    const CostSample sample = s_and_grad(grid, x.x1);
    traj.s[k] = sample.s;
    if (sample.clamped) ++traj.clamp_events;
    if (k == n) break;
    RobotState& next = traj.states[k + 1];
    next.x1 = x.x1 + ctrl.dt * x.x2;
    next.x2 = x.x2 + ctrl.dt * ctrl.u[k];
    next.x3 = x.x3 + ctrl.dt * ctrl.R[k];
  }
  return traj;
}

CostBreakdown total_cost(const StateTrajectory& traj,
                         const ControlTrajectory& ctrl, const MotionWeights& w,
                         const ProblemSpec& spec, double c_bar) {
  const int n = ctrl.steps();
  const double cs = spec.comm_scale(w.gamma);
  const double ms = spec.motion_scale(w.gamma);
  CostBreakdown out;
  for (int k = 0; k < n; ++k) {
    const RobotState& x = traj.states[k];
    out.J_bar += ctrl.dt * (cs * comm_power(ctrl.R[k], traj.s[k], spec.mqam_k) +
                            ms * motion_power(ctrl.u[k], x.x2, w));
  }
  const RobotState& xn = traj.states[n];
  out.terminal_penalty = spec.c1 * (xn.x1 - spec.destination).squaredNorm() +
                         spec.c2 * xn.x2.squaredNorm() +
                         spec.c3 * (xn.x3 - c_bar) * (xn.x3 - c_bar);
  out.J = out.J_bar + out.terminal_penalty;
  return out;
}

}  // namespace commaware
