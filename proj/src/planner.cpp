#include "commaware/planner.hpp"

#include <cmath>

namespace commaware {

void PredictorParams::validate() const {
  if (!(xi_hat >= 0.0)) throw ConfigError("predictor.xi_hat must be non-negative");
  if (!(eta_hat > 0.0)) throw ConfigError("predictor.eta_hat must be positive");
  if (!(rho_hat >= 0.0)) throw ConfigError("predictor.rho_hat must be non-negative");
  if (!std::isfinite(noise_floor_dbm)) {
    throw ConfigError("predictor.noise_floor_dbm must be finite");
  }
}

OfflinePlan plan_offline(const MeasurementSet& meas, const Workspace& ws,
                         double resolution, const PredictorParams& pp,
                         const MotionWeights& w, const ProblemSpec& spec,
                         const SolverParams& sp) {
  pp.validate();
  spec.validate();
  Predictor pred(meas, ws.base_station, pp.xi_hat, pp.eta_hat, pp.rho_hat,
                 pp.noise_floor_dbm);
  OfflinePlan plan;
  plan.fit = pred.path_loss();
  plan.cost_grid = build_cost_grid(pred, ws, resolution);
  RobotState x0;
  x0.x1 = spec.source;
  plan.solution = solve(x0, ControlTrajectory::zeros(spec.steps(), spec.dt),
                        plan.cost_grid, w, spec, spec.c, sp);
  return plan;
}

void OnlineParams::validate(const ProblemSpec& spec) const {
  if (replan_times.empty()) {
    throw ConfigError("online.replan_times must not be empty");
  }
  if (replan_times.front() != 0.0) {
    throw ConfigError("online.replan_times must start at 0");
  }
  for (size_t i = 0; i < replan_times.size(); ++i) {
    const double t = replan_times[i];
    if (i > 0 && !(t > replan_times[i - 1])) {
      throw ConfigError("online.replan_times must be strictly increasing");
    }
    if (!(t < spec.t_f)) {
      throw ConfigError("online.replan_times must lie before t_f");
    }
    const double steps = t / spec.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
      throw ConfigError("online.replan_times must be multiples of dt");
    }
  }
  if (samples_per_cycle < 0) {
    throw ConfigError("online.samples_per_cycle must be non-negative");
  }
  if (sample_near_robot && !(sample_radius > 0.0)) {
    throw ConfigError("online.sample_radius must be positive");
  }
}

OnlineResult plan_online(const GroundTruthField& field,
                         const MeasurementSet& initial_meas,
                         double resolution, const PredictorParams& pp,
                         const MotionWeights& w, const ProblemSpec& spec,
                         const SolverParams& sp, const OnlineParams& op,
                         std::uint64_t seed) {
  pp.validate();
  spec.validate();
  op.validate(spec);
  const Workspace& ws = field.workspace;
  const int cycles = static_cast<int>(op.replan_times.size());

  OnlineResult result;
  result.executed_ctrl.dt = spec.dt;
  result.executed_ctrl.t0 = 0.0;
  result.executed_traj.dt = spec.dt;
  result.executed_traj.t0 = 0.0;

  MeasurementSet meas = initial_meas;
  RobotState handoff;
  handoff.x1 = spec.source;
  double bits_sent = 0.0;
  ControlTrajectory warm = ControlTrajectory::zeros(spec.steps(), spec.dt);

  for (int i = 0; i < cycles; ++i) {
    const double t0 = op.replan_times[i];
    if (i > 0) {
      const std::uint64_t cycle_seed = mix_seed(seed, 100 + i);
      MeasurementSet fresh =
          op.sample_near_robot
              ? sample_measurements_near(field, op.samples_per_cycle,
                                         cycle_seed, handoff.x1,
                                         op.sample_radius)
              : sample_measurements(field, op.samples_per_cycle, cycle_seed);
      meas.append(fresh);
    }

    Predictor pred(meas, ws.base_station, pp.xi_hat, pp.eta_hat, pp.rho_hat,
                   pp.noise_floor_dbm);

    OnlineCycle cycle;
    cycle.t0 = t0;
    cycle.c_bar = spec.c - bits_sent;
    cycle.fit = pred.path_loss();
    cycle.cost_grid = build_cost_grid(pred, ws, resolution);
    cycle.measurements_used = meas.size();

    RobotState x0 = handoff;
    x0.x3 = 0.0;
    cycle.solution =
        solve(x0, warm, cycle.cost_grid, w, spec, cycle.c_bar, sp);

    const double t_next = (i + 1 < cycles) ? op.replan_times[i + 1] : spec.t_f;
    const int exec =
        static_cast<int>(std::round((t_next - t0) / spec.dt));
    cycle.executed_steps = exec;

    const Solution& sol = cycle.solution;
    for (int k = 0; k < exec; ++k) {
      result.executed_ctrl.u.push_back(sol.ctrl.u[k]);
      result.executed_ctrl.R.push_back(sol.ctrl.R[k]);
      RobotState state = sol.traj.states[k];
      state.x3 += bits_sent;
      result.executed_traj.states.push_back(state);
      result.executed_traj.s.push_back(sol.traj.s[k]);
    }
    if (i + 1 == cycles) {
      RobotState state = sol.traj.states[exec];
      state.x3 += bits_sent;
      result.executed_traj.states.push_back(state);
      result.executed_traj.s.push_back(sol.traj.s[exec]);
    } else {
      warm = sol.ctrl;
      warm.u.erase(warm.u.begin(), warm.u.begin() + exec);
      warm.R.erase(warm.R.begin(), warm.R.begin() + exec);
      warm.t0 = t_next;
    }
    handoff.x1 = sol.traj.states[exec].x1;
    handoff.x2 = sol.traj.states[exec].x2;
    bits_sent += sol.traj.states[exec].x3;
    result.cycles.push_back(std::move(cycle));
  }

  result.executed_cost = total_cost(result.executed_traj, result.executed_ctrl,
                                    w, spec, spec.c);
  return result;
}

}  // namespace commaware
