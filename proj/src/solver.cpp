#include "commaware/solver.hpp"

#include <cmath>

namespace commaware {

namespace {

constexpr double kLn2 = 0.6931471805599453;

Vec2 unit_or_zero(const Vec2& v, double eps) {
  const double n = v.norm();
  return n > eps ? Vec2(v / n) : Vec2(0.0, 0.0);
}

}  // namespace

void SolverParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("solver.alpha must lie in (0, 1)");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ConfigError("solver.beta must lie in (0, 1)");
  }
  if (max_iters < 1) throw ConfigError("solver.max_iters must be at least 1");
  if (armijo_cap < 1) throw ConfigError("solver.armijo_cap must be at least 1");
  if (!(theta_tol > 0.0)) throw ConfigError("solver.theta_tol must be positive");
  if (!(eps_v > 0.0)) throw ConfigError("solver.eps_v must be positive");
}

std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::kThetaTolerance:
      return "theta_tolerance";
    case TerminationReason::kArmijoCapReached:
      return "armijo_cap_reached";
    case TerminationReason::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

CostateTrajectory integrate_costate(const StateTrajectory& traj,
                                    const ControlTrajectory& ctrl,
                                    const CostGrid& grid,
                                    const MotionWeights& w,
                                    const ProblemSpec& spec, double c_bar,
                                    double eps_v) {
  const int n = ctrl.steps();
  const double cs = spec.comm_scale(w.gamma);
  const double ms = spec.motion_scale(w.gamma);
  CostateTrajectory costate;
  costate.p1.resize(n + 1);
  costate.p2.resize(n + 1);
  const RobotState& xn = traj.states[n];
  costate.p1[n] = 2.0 * spec.c1 * (xn.x1 - spec.destination);
  costate.p2[n] = 2.0 * spec.c2 * xn.x2;
  costate.p3 = 2.0 * spec.c3 * (xn.x3 - c_bar);
  for (int k = n - 1; k >= 0; --k) {
    const RobotState& x = traj.states[k];
    const CostSample sample = s_and_grad(grid, x.x1);
    const Vec2 v_hat = unit_or_zero(x.x2, eps_v);
    const double u_norm = ctrl.u[k].norm();
    costate.p1[k] =
        costate.p1[k + 1] +
        ctrl.dt * cs * (std::exp2(ctrl.R[k]) - 1.0) / spec.mqam_k * sample.grad;
    costate.p2[k] =
        costate.p2[k + 1] + ctrl.dt * costate.p1[k + 1] +
        ctrl.dt * ms *
            (2.0 * w.k2 * x.x2 + (w.k3 + w.k6 * u_norm) * v_hat);
    if (!costate.p1[k].allFinite() || !costate.p2[k].allFinite()) {
      throw NumericalError(
          "solver", "costate non-finite at step " + std::to_string(k));
    }
  }
  return costate;
}

ControlGradient cost_gradient(const StateTrajectory& traj,
                              const ControlTrajectory& ctrl,
                              const CostateTrajectory& costate,
                              const MotionWeights& w, const ProblemSpec& spec) {
  const int n = ctrl.steps();
  const double cs = spec.comm_scale(w.gamma);
  const double ms = spec.motion_scale(w.gamma);
  ControlGradient grad;
  grad.du.resize(n);
  grad.dR.resize(n);
  for (int k = 0; k < n; ++k) {
    const Vec2 u_hat = unit_or_zero(ctrl.u[k], 1e-12);
    const double v_norm = traj.states[k].x2.norm();
    grad.du[k] = ctrl.dt * (costate.p2[k + 1] +
                            ms * (2.0 * w.k1 * ctrl.u[k] +
                                  (w.k5 + w.k6 * v_norm) * u_hat));
    grad.dR[k] =
        ctrl.dt * (costate.p3 + cs * kLn2 * std::exp2(ctrl.R[k]) *
                                    traj.s[k] / spec.mqam_k);
  }
  return grad;
}

Vec2 pointwise_min_u(const Vec2& p2, const MotionWeights& w,
                     const ProblemSpec& spec) {
  const double ms = spec.motion_scale(w.gamma);
  const Vec2 unconstrained = -p2 / (2.0 * ms * w.k1);
  const double n = unconstrained.norm();
  if (n <= spec.u_max) return unconstrained;
  return spec.u_max / n * unconstrained;
}

double pointwise_min_R(double p3, double s, double comm_scale,
                       const ProblemSpec& spec) {
  const double slope_at_zero = comm_scale * s * kLn2 / spec.mqam_k;
  if (p3 >= -slope_at_zero) return 0.0;
  const double r = std::log2(-p3 * spec.mqam_k / (comm_scale * s * kLn2));
  return std::clamp(r, 0.0, spec.r_max);
}

double descent_measure(const StateTrajectory& traj,
                       const ControlTrajectory& ctrl,
                       const ControlTrajectory& target,
                       const CostateTrajectory& costate,
                       const MotionWeights& w, const ProblemSpec& spec) {
  const int n = ctrl.steps();
  const double cs = spec.comm_scale(w.gamma);
  const double ms = spec.motion_scale(w.gamma);
  double theta = 0.0;
  // Difference of Hamiltonians per step; the state-only terms cancel, which
  // keeps the sum exact when the controls are already close to optimal.
  for (int k = 0; k < n; ++k) {
    const Vec2& u = ctrl.u[k];
    const Vec2& us = target.u[k];
    const double r = ctrl.R[k];
    const double rs = target.R[k];
    const double v_norm = traj.states[k].x2.norm();
    double delta = costate.p2[k + 1].dot(us - u) + costate.p3 * (rs - r) +
                   cs * traj.s[k] / spec.mqam_k * (std::exp2(rs) - std::exp2(r)) +
                   ms * w.k1 * (us.squaredNorm() - u.squaredNorm());
    if (w.k5 > 0.0 || w.k6 > 0.0) {
      delta += ms * (w.k5 + w.k6 * v_norm) * (us.norm() - u.norm());
    }
    theta += ctrl.dt * delta;
  }
  return theta;
}

ArmijoResult armijo(
    const std::function<double(const ControlTrajectory&)>& cost_of,
    const ControlTrajectory& ctrl, const ControlTrajectory& target,
    double current_cost, double theta, const SolverParams& sp) {
  const int n = ctrl.steps();
  ArmijoResult out;
  out.lambda = 1.0;
  for (int j = 0; j <= sp.armijo_cap; ++j) {
    ControlTrajectory candidate = ctrl;
    for (int k = 0; k < n; ++k) {
      candidate.u[k] += out.lambda * (target.u[k] - ctrl.u[k]);
      candidate.R[k] += out.lambda * (target.R[k] - ctrl.R[k]);
    }
    if (cost_of(candidate) - current_cost <= sp.alpha * out.lambda * theta) {
      out.j = j;
      out.accepted = true;
      return out;
    }
    if (j < sp.armijo_cap) out.lambda *= sp.beta;
  }
  out.j = sp.armijo_cap;
  out.accepted = false;
  return out;
}

namespace {

ControlTrajectory project_feasible(const ControlTrajectory& ctrl,
                                   const ProblemSpec& spec) {
  ControlTrajectory out = ctrl;
  for (Vec2& u : out.u) {
    const double n = u.norm();
    if (n > spec.u_max) u *= spec.u_max / n;
  }
  for (double& r : out.R) r = std::clamp(r, 0.0, spec.r_max);
  return out;
}

}  // namespace

Solution solve(const RobotState& x0, const ControlTrajectory& init,
               const CostGrid& grid, const MotionWeights& w,
               const ProblemSpec& spec, double c_bar, const SolverParams& sp) {
  sp.validate();
  spec.validate();
  w.validate();
  if (w.k5 != 0.0 || w.k6 != 0.0) {
    throw ConfigError("the descent solver requires k5 = 0 and k6 = 0");
  }
  if (init.steps() < 1) {
    throw ConfigError("initial controls must cover at least one step");
  }
  if (std::abs(init.dt - spec.dt) > 1e-12) {
    throw ConfigError("initial controls must use the problem step size");
  }

  Solution sol;
  sol.ctrl = project_feasible(init, spec);
  sol.traj = integrate_forward(x0, sol.ctrl, grid);
  sol.cost = total_cost(sol.traj, sol.ctrl, w, spec, c_bar);
  sol.log.push_back({0, sol.cost.J, sol.cost.J_bar, 0.0, 0.0, 0});

  const int n = sol.ctrl.steps();
  const double cs = spec.comm_scale(w.gamma);
  for (int iter = 1; iter <= sp.max_iters; ++iter) {
    sol.iterations = iter;
    const CostateTrajectory costate = integrate_costate(
        sol.traj, sol.ctrl, grid, w, spec, c_bar, sp.eps_v);

    ControlTrajectory target = sol.ctrl;
    for (int k = 0; k < n; ++k) {
      target.u[k] = pointwise_min_u(costate.p2[k + 1], w, spec);
      target.R[k] = pointwise_min_R(costate.p3, sol.traj.s[k], cs, spec);
    }
    const double theta =
        descent_measure(sol.traj, sol.ctrl, target, costate, w, spec);
    if (!std::isfinite(theta)) {
      throw NumericalError("solver", "descent measure became non-finite");
    }

    if (theta >= -sp.theta_tol) {
      sol.log.push_back({iter, sol.cost.J, sol.cost.J_bar, theta, 1.0, 0});
      sol.reason = TerminationReason::kThetaTolerance;
      return sol;
    }

    const ArmijoResult step = armijo(
        [&](const ControlTrajectory& candidate) {
          return total_cost(integrate_forward(x0, candidate, grid), candidate,
                            w, spec, c_bar)
              .J;
        },
        sol.ctrl, target, sol.cost.J, theta, sp);
    if (!step.accepted) {
      sol.log.push_back(
          {iter, sol.cost.J, sol.cost.J_bar, theta, step.lambda, step.j});
      sol.reason = TerminationReason::kArmijoCapReached;
      return sol;
    }
    for (int k = 0; k < n; ++k) {
      sol.ctrl.u[k] += step.lambda * (target.u[k] - sol.ctrl.u[k]);
      sol.ctrl.R[k] += step.lambda * (target.R[k] - sol.ctrl.R[k]);
    }
    sol.traj = integrate_forward(x0, sol.ctrl, grid);
    sol.cost = total_cost(sol.traj, sol.ctrl, w, spec, c_bar);
    sol.log.push_back(
        {iter, sol.cost.J, sol.cost.J_bar, theta, step.lambda, step.j});
  }
  sol.reason = TerminationReason::kMaxIterations;
  return sol;
}

}  // namespace commaware
